export { loadSweep, loadEigPhase, parseSchemaCsv, CsvFormatError } from "./csv.js";
export type { SweepTable, EigPhaseTable, ConverterTrack, CsvMeta } from "./csv.js";
export { gainFigure, phaseFigure, boundsFigure } from "./plots.js";
export { Figure } from "./svg.js";
