/**
 * Minimal SVG line-plot builder: log/linear axes, polylines, filled bands
 * between two curves, shaded vertical regions, legend, annotations. No DOM
 * and no dependencies so figures render identically everywhere.
 */

export type Scale = "linear" | "log";

export interface SeriesSpec {
    label: string;
    x: number[];
    y: number[];
    color: string;
    width?: number;
    dash?: string;
}

export interface BandSpec {
    label: string;
    x: number[];
    lo: number[];
    hi: number[];
    color: string;
    opacity?: number;
}

export interface RegionSpec {
    x0: number;
    x1: number;
    color: string;
    opacity?: number;
    label?: string;
}

export interface FigureOptions {
    title: string;
    subtitle?: string;
    xLabel: string;
    yLabel: string;
    xScale?: Scale;
    yScale?: Scale;
    width?: number;
    height?: number;
}

const MARGIN = { left: 64, right: 16, top: 44, bottom: 46 };

function esc(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

function fmtTick(v: number): string {
    if (v === 0) return "0";
    const a = Math.abs(v);
    if (a >= 10000 || a < 0.01) return v.toExponential(0).replace("e+", "e");
    return Number(v.toPrecision(3)).toString();
}

export class Figure {
    private readonly opts: Required<FigureOptions>;
    private readonly series: SeriesSpec[] = [];
    private readonly bands: BandSpec[] = [];
    private readonly regions: RegionSpec[] = [];
    private readonly hlines: { y: number; color: string; dash: string; label?: string }[] = [];

    constructor(opts: FigureOptions) {
        this.opts = {
            subtitle: "",
            xScale: "log",
            yScale: "linear",
            width: 760,
            height: 420,
            ...opts,
        };
    }

    addSeries(s: SeriesSpec): this {
        this.series.push(s);
        return this;
    }

    addBand(b: BandSpec): this {
        this.bands.push(b);
        return this;
    }

    addRegion(r: RegionSpec): this {
        this.regions.push(r);
        return this;
    }

    addHLine(y: number, color: string, dash = "4 3", label?: string): this {
        this.hlines.push({ y, color, dash, label });
        return this;
    }

    private mapX(lim: [number, number]): (v: number) => number {
        const w = this.opts.width - MARGIN.left - MARGIN.right;
        if (this.opts.xScale === "log") {
            const [a, b] = [Math.log10(lim[0]), Math.log10(lim[1])];
            return (v) => MARGIN.left + ((Math.log10(v) - a) / (b - a)) * w;
        }
        return (v) => MARGIN.left + ((v - lim[0]) / (lim[1] - lim[0])) * w;
    }

    private mapY(lim: [number, number]): (v: number) => number {
        const h = this.opts.height - MARGIN.top - MARGIN.bottom;
        if (this.opts.yScale === "log") {
            const [a, b] = [Math.log10(lim[0]), Math.log10(lim[1])];
            return (v) => MARGIN.top + h - ((Math.log10(v) - a) / (b - a)) * h;
        }
        return (v) => MARGIN.top + h - ((v - lim[0]) / (lim[1] - lim[0])) * h;
    }

    private dataLimits(): { x: [number, number]; y: [number, number] } {
        const xs: number[] = [];
        const ys: number[] = [];
        const usable = (v: number) =>
            Number.isFinite(v) && (this.opts.yScale !== "log" || v > 0);
        for (const s of this.series) {
            for (let i = 0; i < s.x.length; i++) {
                if (usable(s.y[i]) && (this.opts.xScale !== "log" || s.x[i] > 0)) {
                    xs.push(s.x[i]);
                    ys.push(s.y[i]);
                }
            }
        }
        for (const b of this.bands) {
            for (let i = 0; i < b.x.length; i++) {
                if (this.opts.xScale === "log" && b.x[i] <= 0) continue;
                xs.push(b.x[i]);
                if (usable(b.lo[i])) ys.push(b.lo[i]);
                if (usable(b.hi[i])) ys.push(b.hi[i]);
            }
        }
        for (const h of this.hlines) {
            if (usable(h.y)) ys.push(h.y);
        }
        if (xs.length === 0 || ys.length === 0) {
            throw new Error("figure has no drawable data");
        }
        const pad = (lim: [number, number], scale: Scale): [number, number] => {
            if (scale === "log") {
                return [lim[0] / 1.3, lim[1] * 1.3];
            }
            const d = (lim[1] - lim[0]) || 1;
            return [lim[0] - 0.06 * d, lim[1] + 0.06 * d];
        };
        return {
            x: [Math.min(...xs), Math.max(...xs)],
            y: pad([Math.min(...ys), Math.max(...ys)], this.opts.yScale),
        };
    }

    private ticks(lim: [number, number], scale: Scale): number[] {
        if (scale === "log") {
            const out: number[] = [];
            for (let e = Math.ceil(Math.log10(lim[0])); e <= Math.floor(Math.log10(lim[1])); e++) {
                out.push(10 ** e);
            }
            return out;
        }
        const span = lim[1] - lim[0];
        const step = 10 ** Math.floor(Math.log10(span / 5));
        const mult = span / step > 10 ? (span / step > 20 ? 5 : 2) : 1;
        const s = step * mult;
        const out: number[] = [];
        for (let v = Math.ceil(lim[0] / s) * s; v <= lim[1] + 1e-12; v += s) {
            out.push(Math.abs(v) < 1e-12 ? 0 : v);
        }
        return out;
    }

    render(): string {
        const { width, height, title, subtitle, xLabel, yLabel, xScale, yScale } = this.opts;
        const lims = this.dataLimits();
        const X = this.mapX(lims.x);
        const Y = this.mapY(lims.y);
        const clampY = (v: number) => {
            const y = Y(Math.max(Math.min(v, lims.y[1]), lims.y[0]));
            return Number.isFinite(y) ? y : MARGIN.top;
        };
        const plotW = width - MARGIN.left - MARGIN.right;
        const plotH = height - MARGIN.top - MARGIN.bottom;
        const parts: string[] = [];
        parts.push(
            `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"` +
            ` viewBox="0 0 ${width} ${height}" font-family="Helvetica,Arial,sans-serif"` +
            ` data-xscale="${xScale}" data-yscale="${yScale}">`,
        );
        parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
        parts.push(`<text x="${MARGIN.left}" y="20" font-size="14" font-weight="bold">${esc(title)}</text>`);
        if (subtitle) {
            parts.push(`<text x="${MARGIN.left}" y="36" font-size="11" fill="#555">${esc(subtitle)}</text>`);
        }

        for (const r of this.regions) {
            const x0 = X(Math.max(r.x0, lims.x[0]));
            const x1 = X(Math.min(r.x1, lims.x[1]));
            if (!(x1 > x0)) continue;
            parts.push(
                `<rect class="shaded-region" x="${x0.toFixed(2)}" y="${MARGIN.top}"` +
                ` width="${(x1 - x0).toFixed(2)}" height="${plotH}" fill="${r.color}"` +
                ` opacity="${r.opacity ?? 0.25}"/>`,
            );
        }

        // axes + grid
        for (const t of this.ticks(lims.x, xScale)) {
            const x = X(t).toFixed(2);
            parts.push(`<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + plotH}" stroke="#ddd"/>`);
            parts.push(`<text x="${x}" y="${MARGIN.top + plotH + 16}" font-size="10" text-anchor="middle">${fmtTick(t)}</text>`);
        }
        for (const t of this.ticks(lims.y, yScale)) {
            const y = Y(t).toFixed(2);
            parts.push(`<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#ddd"/>`);
            parts.push(`<text x="${MARGIN.left - 6}" y="${y}" font-size="10" text-anchor="end" dominant-baseline="middle">${fmtTick(t)}</text>`);
        }
        parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`);
        parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" font-size="12" text-anchor="middle">${esc(xLabel)}</text>`);
        parts.push(
            `<text x="16" y="${MARGIN.top + plotH / 2}" font-size="12" text-anchor="middle"` +
            ` transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${esc(yLabel)}</text>`,
        );

        for (const b of this.bands) {
            const fwd = b.x.map((v, i) => `${X(v).toFixed(2)},${clampY(b.hi[i]).toFixed(2)}`);
            const back = [...b.x.keys()].reverse().map(
                (i) => `${X(b.x[i]).toFixed(2)},${clampY(b.lo[i]).toFixed(2)}`,
            );
            parts.push(
                `<polygon class="band" points="${fwd.concat(back).join(" ")}"` +
                ` fill="${b.color}" opacity="${b.opacity ?? 0.3}"/>`,
            );
        }
        for (const h of this.hlines) {
            const y = clampY(h.y).toFixed(2);
            parts.push(
                `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}"` +
                ` stroke="${h.color}" stroke-dasharray="${h.dash}"/>`,
            );
        }
        for (const s of this.series) {
            const pts: string[] = [];
            for (let i = 0; i < s.x.length; i++) {
                const ok = Number.isFinite(s.y[i]) && (yScale !== "log" || s.y[i] > 0) &&
                    (xScale !== "log" || s.x[i] > 0);
                if (ok) pts.push(`${X(s.x[i]).toFixed(2)},${Y(s.y[i]).toFixed(2)}`);
            }
            parts.push(
                `<polyline class="series" points="${pts.join(" ")}" fill="none"` +
                ` stroke="${s.color}" stroke-width="${s.width ?? 1.6}"` +
                (s.dash ? ` stroke-dasharray="${s.dash}"` : "") + `/>`,
            );
        }

        // legend
        const entries = [
            ...this.series.map((s) => ({ label: s.label, color: s.color, dash: s.dash })),
            ...this.bands.map((b) => ({ label: b.label, color: b.color, dash: undefined })),
            ...this.regions.filter((r) => r.label).map((r) => ({ label: r.label!, color: r.color, dash: undefined })),
        ];
        const seen = new Set<string>();
        let ly = MARGIN.top + 8;
        for (const e of entries) {
            if (seen.has(e.label)) continue;
            seen.add(e.label);
            const lx = MARGIN.left + plotW - 180;
            parts.push(
                `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${e.color}"` +
                ` stroke-width="2"${e.dash ? ` stroke-dasharray="${e.dash}"` : ""}/>`,
            );
            parts.push(`<text x="${lx + 28}" y="${ly + 3}" font-size="10">${esc(e.label)}</text>`);
            ly += 14;
        }
        parts.push("</svg>");
        return parts.join("\n");
    }
}
