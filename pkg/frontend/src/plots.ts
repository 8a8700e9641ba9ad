/**
 * Figure builders: gain condition, phase bands with the +-pi-shifted
 * network overlay, and phase bounds against actual loop eigenvalue
 * arguments. Non-sectorial stretches are shaded across the full axis,
 * since no phase information exists there.
 */

import { EigPhaseTable, SweepTable } from "./csv.js";
import { Figure, RegionSpec } from "./svg.js";

const PALETTE = ["#c0392b", "#2471a3", "#1e8449", "#b7950b", "#884ea0", "#17a589"];
const NET_COLOR = "#333333";
const SHADE = "#f5b7b1";

function stamp(table: { meta: { schema: string; scenario: string; frame: string } }): string {
    return `${table.meta.scenario} | frame=${table.meta.frame} | ${table.meta.schema}`;
}

/** Contiguous frequency strips where the predicate holds. */
function strips(fHz: number[], flag: boolean[]): Array<[number, number]> {
    const out: Array<[number, number]> = [];
    let start: number | null = null;
    for (let i = 0; i < fHz.length; i++) {
        if (flag[i] && start === null) start = fHz[i];
        if (!flag[i] && start !== null) {
            out.push([start, fHz[i]]);
            start = null;
        }
    }
    if (start !== null) out.push([start, fHz[fHz.length - 1]]);
    return out;
}

function shadeRegions(fHz: number[], nonSectorial: boolean[]): RegionSpec[] {
    return strips(fHz, nonSectorial).map(([x0, x1]) => ({
        x0: Math.max(x0, 1e-12),
        x1,
        color: SHADE,
        opacity: 0.45,
        label: "non-sectorial (full interval)",
    }));
}

function positiveF(t: { fHz: number[] }): boolean[] {
    return t.fHz.map((f) => f > 0);
}

function filterBy<T>(xs: T[], keep: boolean[]): T[] {
    return xs.filter((_, i) => keep[i]);
}

/** Gain condition: largest converter gain against the smallest network gain. */
export function gainFigure(sweep: SweepTable): Figure {
    const keep = positiveF(sweep);
    const f = filterBy(sweep.fHz, keep);
    const fig = new Figure({
        title: "Gain condition",
        subtitle: stamp(sweep),
        xLabel: "frequency (Hz)",
        yLabel: "singular value",
        xScale: "log",
        yScale: "log",
    });
    fig.addSeries({
        label: "max converter gain", x: f,
        y: filterBy(sweep.gainLhs, keep), color: PALETTE[0], width: 2,
    });
    fig.addSeries({
        label: "min network gain", x: f,
        y: filterBy(sweep.gainRhs, keep), color: NET_COLOR, width: 2, dash: "6 3",
    });
    const violated = sweep.gainOk.map((ok) => !ok);
    for (const r of shadeRegions(sweep.fHz, violated)) {
        fig.addRegion({ ...r, color: "#fdebd0", label: "gain condition violated" });
    }
    return fig;
}

/** Phase bands: converter intervals must clear the network interval shifted by +-pi. */
export function phaseFigure(sweep: SweepTable): Figure {
    const keep = positiveF(sweep);
    const f = filterBy(sweep.fHz, keep);
    const fig = new Figure({
        title: "Phase condition",
        subtitle: stamp(sweep),
        xLabel: "frequency (Hz)",
        yLabel: "phase (rad)",
        xScale: "log",
        yScale: "linear",
    });
    const nonAny = sweep.fHz.map((_, i) =>
        sweep.netinvClass[i] === "non" ||
        sweep.converters.some((c) => c.cls[i] === "non"));
    for (const r of shadeRegions(sweep.fHz, nonAny)) fig.addRegion(r);

    sweep.converters.forEach((c, k) => {
        const defined = keep.map((ok, i) => ok && c.cls[i] !== "non");
        fig.addBand({
            label: `converter ${c.bus} phases`,
            x: filterBy(f, filterBy(defined, keep)),
            lo: filterBy(c.phiLo, defined),
            hi: filterBy(c.phiHi, defined),
            color: PALETTE[k % PALETTE.length],
            opacity: 0.35,
        });
    });
    const invDefined = keep.map((ok, i) => ok && sweep.netinvClass[i] !== "non");
    const fInv = filterBy(sweep.fHz, invDefined);
    fig.addSeries({
        label: "pi - network inverse max phase",
        x: fInv,
        y: filterBy(sweep.netinvPhiHi, invDefined).map((v) => Math.PI - v),
        color: NET_COLOR, width: 2, dash: "6 3",
    });
    fig.addSeries({
        label: "-pi - network inverse min phase",
        x: fInv,
        y: filterBy(sweep.netinvPhiLo, invDefined).map((v) => -Math.PI - v),
        color: NET_COLOR, width: 2, dash: "2 3",
    });
    return fig;
}

/** Summed phase bounds against the actual loop eigenvalue arguments. */
export function boundsFigure(sweep: SweepTable, eig: EigPhaseTable): Figure {
    if (sweep.meta.scenario !== eig.meta.scenario) {
        throw new Error(
            `scenario mismatch: sweep '${sweep.meta.scenario}' vs eigphase '${eig.meta.scenario}'`,
        );
    }
    const fig = new Figure({
        title: "Small-phase bounds vs loop eigenvalue phases",
        subtitle: stamp(sweep),
        xLabel: "frequency (Hz)",
        yLabel: "phase (rad)",
        xScale: "log",
        yScale: "linear",
    });
    const keep = eig.fHz.map((f, i) => f > 0 && eig.boundsDefined[i]);
    const f = filterBy(eig.fHz, keep);
    fig.addBand({
        label: "summed phase bounds",
        x: f,
        lo: filterBy(eig.boundLo, keep),
        hi: filterBy(eig.boundHi, keep),
        color: "#aed6f1",
        opacity: 0.5,
    });
    eig.eigArgs.forEach((args, k) => {
        // suppress numerically vanishing eigenvalues: their phase is noise
        const y = args.map((a, i) => {
            const magMax = Math.max(...eig.eigMags.map((m) => m[i]));
            const mag = eig.eigMags[k]?.[i] ?? 1;
            return mag < 1e-8 * magMax ? Number.NaN : a;
        });
        fig.addSeries({
            label: k === 0 ? "loop eigenvalue phases" : `loop eigenvalue ${k}`,
            x: f,
            y: filterBy(y, keep),
            color: PALETTE[k % PALETTE.length],
            width: 1.4,
        });
    });
    const undefBounds = eig.fHz.map((_, i) => !eig.boundsDefined[i]);
    for (const r of shadeRegions(eig.fHz, undefBounds)) fig.addRegion(r);
    fig.addHLine(Math.PI, "#777", "4 3");
    fig.addHLine(-Math.PI, "#777", "4 3");
    return fig;
}
