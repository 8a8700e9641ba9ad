import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { test } from "node:test";

import { CsvFormatError, loadEigPhase, loadSweep, parseSchemaCsv } from "../src/csv.js";

const DATA = join(import.meta.dirname, "..", "..", "testdata");

function read(name: string): string {
    return readFileSync(join(DATA, name), "utf8");
}

test("schema line and columns are parsed", () => {
    const t = parseSchemaCsv(read("infbus_stable_sweep.csv"));
    assert.equal(t.meta.schema, "phasecert.sweep.v1");
    assert.equal(t.meta.scenario, "infbus_stable");
    assert.equal(t.meta.frame, "blended");
    assert.ok(t.columns.includes("f_hz"));
    assert.ok(t.rows.length > 50);
});

test("sweep loader types the table and finds converters", () => {
    const s = loadSweep(read("ieee14_stable_sweep.csv"));
    assert.deepEqual(s.converters.map((c) => c.bus), ["2", "3", "6", "8"]);
    assert.equal(s.fHz.length, s.gainLhs.length);
    assert.ok(s.fHz.every((f, i) => i === 0 || f > s.fHz[i - 1]));
    assert.ok(s.satisfied.every((v) => typeof v === "boolean"));
});

test("eigphase loader collects eigenvalue argument columns", () => {
    const e = loadEigPhase(read("infbus_stable_eigphase.csv"));
    assert.equal(e.eigArgs.length, 2);
    assert.equal(e.eigArgs[0].length, e.fHz.length);
});

test("empty input is a clear error", () => {
    assert.throws(() => loadSweep(""), CsvFormatError);
    assert.throws(() => loadSweep("f_hz,gain\n1,2\n"), CsvFormatError);
});

test("wrong schema is rejected", () => {
    assert.throws(() => loadSweep(read("infbus_stable_eigphase.csv")), CsvFormatError);
    assert.throws(() => loadEigPhase(read("infbus_stable_sweep.csv")), CsvFormatError);
});

test("ragged rows are rejected", () => {
    const text = "# schema=phasecert.sweep.v1 scenario=x frame=y\nf_hz,a\n1,2,3\n";
    assert.throws(() => parseSchemaCsv(text), CsvFormatError);
});
