/** Shared argument handling: positional CSV path(s) plus --out. */

import { writeFileSync } from "fs";

export interface CliArgs {
    inputs: string[];
    out: string;
}

export function parseArgs(argv: string[], nInputs: number, usage: string): CliArgs {
    const inputs: string[] = [];
    let out = "";
    for (let i = 0; i < argv.length; i++) {
        if (argv[i] === "--out") {
            out = argv[++i] ?? "";
        } else if (argv[i].startsWith("--")) {
            fail(`unknown flag '${argv[i]}'\n${usage}`);
        } else {
            inputs.push(argv[i]);
        }
    }
    if (inputs.length !== nInputs || !out) {
        fail(usage);
    }
    return { inputs, out };
}

export function fail(msg: string): never {
    console.error(msg);
    process.exit(1);
}

export function writeSvg(path: string, svg: string): void {
    writeFileSync(path, svg + "\n", "utf8");
}
