/** Render the phase-condition figure from a sweep CSV. */

import { loadSweep, readText } from "./csv.js";
import { phaseFigure } from "./plots.js";
import { fail, parseArgs, writeSvg } from "./cli_common.js";

const USAGE = "usage: plot_phase <sweep.csv> --out <figure.svg>";

const args = parseArgs(process.argv.slice(2), 1, USAGE);
try {
    const sweep = loadSweep(readText(args.inputs[0]));
    writeSvg(args.out, phaseFigure(sweep).render());
    console.log(`wrote ${args.out} (${sweep.converters.length} converters)`);
} catch (err) {
    fail(`plot_phase: ${(err as Error).message}`);
}
