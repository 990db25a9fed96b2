/**
 * Client-side re-implementation of the server's threshold rule.
 *
 * The server publishes six-decimal grids and decides on exactly those
 * numbers, so recomputing here from the response grids must reproduce its
 * verdict for every slider position.  The match-fraction comparison uses
 * integer rational arithmetic on the slider's decimal text, mirroring the
 * server's exact-fraction reading of lo_threshold.
 */

export interface GridPayload {
  kind: string
  row_ids: string[]
  col_ids: string[]
  cells: number[][]
  neutral_cells?: number[][]
}

export interface AssessConfig {
  impact: number
  sim_threshold: number
  lo_threshold: number
}

export interface MatchedRowPayload {
  receiving_lo: string
  best_sending_lo: string
  score: number
}

export interface OutcomeDiagnostics {
  outcome_id: string
  text: string
  verbs: string[]
  assignments: {
    verb: string
    level: number
    method: 'seed' | 'silhouette'
    silhouette_scores: (number | null)[] | null
  }[]
  skipped_verbs: string[]
  level: number | null
}

export interface AssessResponse {
  receiving_course: string
  sending_course: string
  config: AssessConfig
  grids: { taxonomic: GridPayload; semantic: GridPayload; final: GridPayload }
  outcome_diagnostics: { receiving: OutcomeDiagnostics[]; sending: OutcomeDiagnostics[] }
  matched_rows: MatchedRowPayload[]
  match_fraction: number
  decision: 'yes' | 'no'
}

/** Exact rational form of a slider's decimal text, e.g. "0.33" -> 33/100. */
export interface ThresholdFraction {
  numerator: number
  denominator: number
}

export function parseThresholdFraction(text: string): ThresholdFraction {
  const trimmed = text.trim()
  if (!/^\d+(\.\d+)?$/.test(trimmed)) {
    throw new Error(`not a plain decimal: ${text}`)
  }
  const [whole, frac = ''] = trimmed.split('.')
  const denominator = 10 ** frac.length
  const numerator = Number(whole) * denominator + Number(frac || '0')
  return { numerator, denominator }
}

export interface RowBest {
  col: number
  value: number
}

/** Best column per row; ties resolve to the lowest column index. */
export function rowMaxima(cells: number[][]): RowBest[] {
  return cells.map((row) => {
    let best = 0
    for (let j = 1; j < row.length; j += 1) {
      if (row[j] > row[best]) best = j
    }
    return { col: best, value: row[best] }
  })
}

export interface Verdict {
  decision: 'yes' | 'no'
  matchedRows: MatchedRowPayload[]
  matchFraction: number
}

export function recomputeVerdict(
  finalGrid: GridPayload,
  simThreshold: number,
  loThreshold: ThresholdFraction,
): Verdict {
  const grid = finalGrid
  const best = rowMaxima(grid.cells)
  const matchedRows: MatchedRowPayload[] = []
  best.forEach((entry, i) => {
    if (entry.value >= simThreshold) {
      matchedRows.push({
        receiving_lo: grid.row_ids[i],
        best_sending_lo: grid.col_ids[entry.col],
        score: entry.value,
      })
    }
  })
  const m = grid.cells.length
  const granted =
    matchedRows.length * loThreshold.denominator >= loThreshold.numerator * m
  return {
    decision: granted ? 'yes' : 'no',
    matchedRows,
    matchFraction: matchedRows.length / m,
  }
}

/** Cells at or above the similarity threshold, keyed "row,col". */
export function highlightedCells(grid: GridPayload, simThreshold: number): Set<string> {
  const keys = new Set<string>()
  grid.cells.forEach((row, i) => {
    row.forEach((value, j) => {
      if (value >= simThreshold) keys.add(`${i},${j}`)
    })
  })
  return keys
}

/** Row ids the verdict flags as matched (for heatmap row badges). */
export function matchedRowIds(verdict: Verdict): Set<string> {
  return new Set(verdict.matchedRows.map((m) => m.receiving_lo))
}
