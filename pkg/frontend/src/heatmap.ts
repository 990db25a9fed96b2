/**
 * Final-grid heatmap: cells at or above the similarity threshold are
 * highlighted, each row's best cell is outlined, and matched rows carry a
 * badge.  The plan step is pure so tests can compare the highlight set
 * against the server's matched rows without a DOM.
 */

import {
  type GridPayload,
  type ThresholdFraction,
  type Verdict,
  matchedRowIds,
  recomputeVerdict,
  rowMaxima,
} from './decision.js'

export interface HeatmapCellPlan {
  row: number
  col: number
  value: number
  highlighted: boolean
  rowBest: boolean
  neutral: boolean
}

export interface HeatmapPlan {
  rowIds: string[]
  colIds: string[]
  cells: HeatmapCellPlan[][]
  verdict: Verdict
  matchedRows: Set<string>
}

export function planHeatmap(
  grid: GridPayload,
  simThreshold: number,
  loThreshold: ThresholdFraction,
): HeatmapPlan {
  const best = rowMaxima(grid.cells)
  const neutral = new Set((grid.neutral_cells ?? []).map(([i, j]) => `${i},${j}`))
  const verdict = recomputeVerdict(grid, simThreshold, loThreshold)
  const cells = grid.cells.map((row, i) =>
    row.map((value, j) => ({
      row: i,
      col: j,
      value,
      highlighted: value >= simThreshold,
      rowBest: best[i].col === j,
      neutral: neutral.has(`${i},${j}`),
    })),
  )
  return {
    rowIds: grid.row_ids,
    colIds: grid.col_ids,
    cells,
    verdict,
    matchedRows: matchedRowIds(verdict),
  }
}

function cellColor(value: number): string {
  const clamped = Math.max(0, Math.min(1, value))
  const hue = 220 - 160 * clamped // blue (low) toward warm green (high)
  const light = 88 - 40 * clamped
  return `hsl(${hue}, 70%, ${light}%)`
}

export function renderHeatmap(container: HTMLElement, plan: HeatmapPlan): void {
  container.textContent = ''
  const table = document.createElement('table')
  table.className = 'heatmap'

  const header = document.createElement('tr')
  header.appendChild(document.createElement('th'))
  for (const colId of plan.colIds) {
    const th = document.createElement('th')
    th.textContent = colId
    header.appendChild(th)
  }
  header.appendChild(document.createElement('th'))
  table.appendChild(header)

  plan.cells.forEach((row, i) => {
    const tr = document.createElement('tr')
    const label = document.createElement('th')
    label.textContent = plan.rowIds[i]
    tr.appendChild(label)
    for (const cell of row) {
      const td = document.createElement('td')
      td.textContent = cell.value.toFixed(2)
      td.style.background = cellColor(cell.value)
      td.style.color = cell.value > 0.55 ? '#fff' : '#1a1a2e'
      const classes = ['cell']
      if (cell.highlighted) classes.push('hl')
      if (cell.rowBest) classes.push('best')
      if (cell.neutral) classes.push('neutral')
      td.className = classes.join(' ')
      td.title =
        `${plan.rowIds[cell.row]} × ${plan.colIds[cell.col]} = ` +
        `${cell.value.toFixed(6)}` +
        (cell.neutral ? ' (neutral: unassigned level)' : '')
      tr.appendChild(td)
    }
    const badge = document.createElement('td')
    badge.className = 'row-badge'
    badge.textContent = plan.matchedRows.has(plan.rowIds[i]) ? 'matched' : '—'
    tr.appendChild(badge)
    table.appendChild(tr)
  })
  container.appendChild(table)
}
