/** Render phase bounds vs actual loop eigenvalue phases. */

import { loadEigPhase, loadSweep, readText } from "./csv.js";
import { boundsFigure } from "./plots.js";
import { fail, parseArgs, writeSvg } from "./cli_common.js";

const USAGE = "usage: plot_bounds <sweep.csv> <eigphase.csv> --out <figure.svg>";

const args = parseArgs(process.argv.slice(2), 2, USAGE);
try {
    const sweep = loadSweep(readText(args.inputs[0]));
    const eig = loadEigPhase(readText(args.inputs[1]));
    writeSvg(args.out, boundsFigure(sweep, eig).render());
    console.log(`wrote ${args.out}`);
} catch (err) {
    fail(`plot_bounds: ${(err as Error).message}`);
}
