/** Render the gain-condition figure from a sweep CSV. */

import { loadSweep, readText } from "./csv.js";
import { gainFigure } from "./plots.js";
import { fail, parseArgs, writeSvg } from "./cli_common.js";

const USAGE = "usage: plot_gain <sweep.csv> --out <figure.svg>";

const args = parseArgs(process.argv.slice(2), 1, USAGE);
try {
    const sweep = loadSweep(readText(args.inputs[0]));
    writeSvg(args.out, gainFigure(sweep).render());
    console.log(`wrote ${args.out} (${sweep.fHz.length} frequencies)`);
} catch (err) {
    fail(`plot_gain: ${(err as Error).message}`);
}
