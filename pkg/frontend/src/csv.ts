/**
 * Parsers for the schema-tagged CSV files written by the certification CLI.
 *
 * Every file starts with a `# schema=... key=value ...` line followed by a
 * column header row. These readers never recompute any physics: they only
 * validate the schema, type the columns, and hand rows to the plotters.
 */

import { readFileSync } from "fs";

export interface CsvMeta {
    schema: string;
    scenario: string;
    frame: string;
    [key: string]: string;
}

export interface RawTable {
    meta: CsvMeta;
    columns: string[];
    rows: string[][];
}

export class CsvFormatError extends Error {}

const SWEEP_SCHEMA = "phasecert.sweep.v1";
const EIGPHASE_SCHEMA = "phasecert.eigphase.v1";

export function parseSchemaCsv(text: string): RawTable {
    const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
    if (lines.length === 0) {
        throw new CsvFormatError("empty CSV: no schema line");
    }
    if (!lines[0].startsWith("# ")) {
        throw new CsvFormatError("missing '# schema=...' header line");
    }
    const meta: CsvMeta = { schema: "", scenario: "", frame: "" };
    for (const tok of lines[0].slice(2).trim().split(/\s+/)) {
        const eq = tok.indexOf("=");
        if (eq > 0) {
            meta[tok.slice(0, eq)] = tok.slice(eq + 1);
        }
    }
    if (!meta.schema) {
        throw new CsvFormatError("schema line carries no schema= tag");
    }
    if (lines.length < 2) {
        throw new CsvFormatError("missing column header row");
    }
    const columns = lines[1].split(",");
    const rows = lines.slice(2).map((l) => l.split(","));
    for (const r of rows) {
        if (r.length !== columns.length) {
            throw new CsvFormatError(
                `row has ${r.length} fields, expected ${columns.length}`,
            );
        }
    }
    return { meta, columns, rows };
}

/** One converter's per-frequency phase data. */
export interface ConverterTrack {
    bus: string;
    cls: string[];
    sigmaMax: number[];
    phiLo: number[];
    phiHi: number[];
}

export interface SweepTable {
    meta: CsvMeta;
    fHz: number[];
    gainLhs: number[];
    gainRhs: number[];
    converters: ConverterTrack[];
    netinvClass: string[];
    netinvPhiLo: number[];
    netinvPhiHi: number[];
    gainOk: boolean[];
    phaseOk: boolean[];
    satisfied: boolean[];
}

function numericColumn(t: RawTable, name: string): number[] {
    const k = t.columns.indexOf(name);
    if (k < 0) {
        throw new CsvFormatError(`missing column '${name}'`);
    }
    return t.rows.map((r) => {
        const v = Number(r[k]);
        if (!Number.isFinite(v)) {
            throw new CsvFormatError(`non-numeric value '${r[k]}' in '${name}'`);
        }
        return v;
    });
}

function stringColumn(t: RawTable, name: string): string[] {
    const k = t.columns.indexOf(name);
    if (k < 0) {
        throw new CsvFormatError(`missing column '${name}'`);
    }
    return t.rows.map((r) => r[k]);
}

export function loadSweep(text: string): SweepTable {
    const t = parseSchemaCsv(text);
    if (t.meta.schema !== SWEEP_SCHEMA) {
        throw new CsvFormatError(`unsupported sweep schema '${t.meta.schema}'`);
    }
    const fHz = numericColumn(t, "f_hz");
    for (let i = 1; i < fHz.length; i++) {
        if (!(fHz[i] > fHz[i - 1])) {
            throw new CsvFormatError("frequencies must be strictly increasing");
        }
    }
    const buses = t.columns
        .filter((c) => /^c\w+_class$/.test(c))
        .map((c) => c.slice(1, -"_class".length));
    const converters = buses.map((bus) => ({
        bus,
        cls: stringColumn(t, `c${bus}_class`),
        sigmaMax: numericColumn(t, `c${bus}_sigma_max`),
        phiLo: numericColumn(t, `c${bus}_phi_lo`),
        phiHi: numericColumn(t, `c${bus}_phi_hi`),
    }));
    const boolCol = (name: string) => stringColumn(t, name).map((v) => v === "1");
    return {
        meta: t.meta,
        fHz,
        gainLhs: numericColumn(t, "gain_lhs"),
        gainRhs: numericColumn(t, "gain_rhs"),
        converters,
        netinvClass: stringColumn(t, "netinv_class"),
        netinvPhiLo: numericColumn(t, "netinv_phi_lo"),
        netinvPhiHi: numericColumn(t, "netinv_phi_hi"),
        gainOk: boolCol("gain_ok"),
        phaseOk: boolCol("phase_ok"),
        satisfied: boolCol("satisfied"),
    };
}

export interface EigPhaseTable {
    meta: CsvMeta;
    fHz: number[];
    boundLo: number[];
    boundHi: number[];
    boundsDefined: boolean[];
    eigArgs: number[][];
    eigMags: number[][];
}

export function loadEigPhase(text: string): EigPhaseTable {
    const t = parseSchemaCsv(text);
    if (t.meta.schema !== EIGPHASE_SCHEMA) {
        throw new CsvFormatError(`unsupported eigphase schema '${t.meta.schema}'`);
    }
    const argCols = t.columns.filter((c) => c.startsWith("arg_lam"));
    const magCols = t.columns.filter((c) => c.startsWith("mag_lam"));
    return {
        meta: t.meta,
        fHz: numericColumn(t, "f_hz"),
        boundLo: numericColumn(t, "bound_lo"),
        boundHi: numericColumn(t, "bound_hi"),
        boundsDefined: stringColumn(t, "bounds_defined").map((v) => v === "1"),
        eigArgs: argCols.map((c) => numericColumn(t, c)),
        eigMags: magCols.map((c) => numericColumn(t, c)),
    };
}

export function readText(path: string): string {
    return readFileSync(path, "utf8");
}
