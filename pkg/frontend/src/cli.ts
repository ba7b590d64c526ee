#!/usr/bin/env node
import { pathToFileURL } from "node:url";

import { SchemaError } from "./csv.js";
import { FIGURE_KINDS, FigureKind, renderFile } from "./figures.js";

const USAGE = `usage: sim-figures render --kind <kind> --in <csv> --out <svg>

kinds: ${FIGURE_KINDS.join(", ")}
options:
  --x-label <text>   override the x-axis label
  --y-label <text>   override the y-axis label
`;

interface Args {
  kind: FigureKind;
  input: string;
  output: string;
  xLabel?: string;
  yLabel?: string;
}

function parseArgs(argv: string[]): Args {
  if (argv[0] !== "render") {
    throw new Error(`unknown command '${argv[0] ?? ""}'\n${USAGE}`);
  }
  const values = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i]!;
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(`expected '--flag value' pairs, got '${flag}'\n${USAGE}`);
    }
    values.set(flag.slice(2), value);
  }
  for (const required of ["kind", "in", "out"]) {
    if (!values.has(required)) {
      throw new Error(`missing required flag --${required}\n${USAGE}`);
    }
  }
  const kind = values.get("kind")!;
  if (!(FIGURE_KINDS as string[]).includes(kind)) {
    throw new Error(`unknown kind '${kind}' (choose from ${FIGURE_KINDS.join(", ")})`);
  }
  const known = new Set(["kind", "in", "out", "x-label", "y-label"]);
  for (const flag of values.keys()) {
    if (!known.has(flag)) {
      throw new Error(`unknown flag --${flag}\n${USAGE}`);
    }
  }
  return {
    kind: kind as FigureKind,
    input: values.get("in")!,
    output: values.get("out")!,
    xLabel: values.get("x-label"),
    yLabel: values.get("y-label"),
  };
}

/** Entry point; returns the process exit code. */
export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    return 2;
  }
  try {
    renderFile({
      kind: args.kind,
      input: args.input,
      output: args.output,
      xLabel: args.xLabel,
      yLabel: args.yLabel,
    });
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
    } else {
      process.stderr.write(`error: ${(err as Error).message}\n`);
    }
    return 1;
  }
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
