/**
 * What-if console: edit two courses, drag the three leniency controls,
 * and watch the heatmap, match list, level badges, and verdict react.
 *
 * Threshold sliders reclassify the already-returned grids instantly on
 * the client; impact changes and outcome edits need fresh grids, so they
 * trigger a debounced /assess call (latest wins).
 */

import { ABORTED, ApiClient, type CourseDoc, debounced } from './api.js'
import { parseThresholdFraction, type AssessResponse } from './decision.js'
import { CourseEditor, exportCourse, importCourse } from './editor.js'
import { planHeatmap, renderHeatmap } from './heatmap.js'
import { wireInspector } from './inspector.js'

const DEMO_RECEIVING: CourseDoc = {
  course_id: 'CS101',
  role: 'receiving',
  learning_outcomes: [
    { id: 'CS101-1', text: 'Design and implement simple algorithms' },
    { id: 'CS101-2', text: 'Analyze the running time of programs' },
  ],
}

const DEMO_SENDING: CourseDoc = {
  course_id: 'TR101',
  role: 'sending',
  learning_outcomes: [
    { id: 'TR101-1', text: 'Design and implement basic algorithms' },
    { id: 'TR101-2', text: 'Analyze the running time of simple programs' },
  ],
}

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id)
  if (!element) throw new Error(`missing #${id}`)
  return element as T
}

const api = new ApiClient('')

const impactSlider = byId<HTMLInputElement>('impact')
const simSlider = byId<HTMLInputElement>('sim-threshold')
const loSlider = byId<HTMLInputElement>('lo-threshold')
const impactValue = byId<HTMLElement>('impact-value')
const simValue = byId<HTMLElement>('sim-value')
const loValue = byId<HTMLElement>('lo-value')
const verdictBanner = byId<HTMLElement>('verdict')
const heatmapBox = byId<HTMLElement>('heatmap')
const matchList = byId<HTMLElement>('match-list')
const statusLine = byId<HTMLElement>('status')

let lastResponse: AssessResponse | null = null

const refreshFromServer = debounced(250, () => void requestAssessment())

const receivingEditor = new CourseEditor(
  byId('receiving-editor'), 'receiving', DEMO_RECEIVING,
  { onChange: refreshFromServer },
)
const sendingEditor = new CourseEditor(
  byId('sending-editor'), 'sending', DEMO_SENDING,
  { onChange: refreshFromServer },
)

function setStatus(text: string, isError = false): void {
  statusLine.textContent = text
  statusLine.className = isError ? 'status error' : 'status'
}

async function requestAssessment(): Promise<void> {
  setStatus('assessing…')
  try {
    const result = await api.assess(
      receivingEditor.document(),
      sendingEditor.document(),
      {
        impact: Number(impactSlider.value),
        sim_threshold: Number(simSlider.value),
        lo_threshold: Number(loSlider.value),
      },
    )
    if (result === ABORTED) return
    lastResponse = result
    receivingEditor.applyDiagnostics(result.outcome_diagnostics.receiving)
    sendingEditor.applyDiagnostics(result.outcome_diagnostics.sending)
    setStatus(`grids from server (provider responded, ` +
      `${result.grids.final.row_ids.length}×${result.grids.final.col_ids.length})`)
    repaint()
  } catch (error) {
    setStatus(`assessment failed: ${String(error)}`, true)
  }
}

function repaint(): void {
  impactValue.textContent = `${impactSlider.value}%`
  simValue.textContent = Number(simSlider.value).toFixed(2)
  loValue.textContent = Number(loSlider.value).toFixed(2)
  if (!lastResponse) {
    verdictBanner.textContent = 'no assessment yet'
    verdictBanner.className = 'verdict pending'
    heatmapBox.textContent = 'Edit a course or move the impact slider to assess.'
    matchList.textContent = ''
    return
  }
  const plan = planHeatmap(
    lastResponse.grids.final,
    Number(simSlider.value),
    parseThresholdFraction(Number(loSlider.value).toFixed(2)),
  )
  renderHeatmap(heatmapBox, plan)

  const verdict = plan.verdict
  verdictBanner.textContent =
    verdict.decision === 'yes'
      ? `GRANT CREDIT — ${verdict.matchedRows.length} of ` +
        `${lastResponse.grids.final.row_ids.length} outcomes matched`
      : `NO CREDIT — ${verdict.matchedRows.length} of ` +
        `${lastResponse.grids.final.row_ids.length} outcomes matched`
  verdictBanner.className = `verdict ${verdict.decision}`

  matchList.textContent = ''
  for (const match of verdict.matchedRows) {
    const item = document.createElement('li')
    item.textContent =
      `${match.receiving_lo} ← ${match.best_sending_lo} (${match.score.toFixed(4)})`
    matchList.appendChild(item)
  }
  if (verdict.matchedRows.length === 0) {
    const item = document.createElement('li')
    item.textContent = 'no outcome reaches the similarity threshold'
    item.className = 'empty'
    matchList.appendChild(item)
  }
}

// threshold sliders: pure client recompute, no server round-trip
simSlider.addEventListener('input', repaint)
loSlider.addEventListener('input', repaint)
// impact changes the grids themselves: debounced server call
impactSlider.addEventListener('input', () => {
  impactValue.textContent = `${impactSlider.value}%`
  refreshFromServer()
})

wireInspector(
  api,
  byId<HTMLInputElement>('inspector-verb'),
  byId<HTMLButtonElement>('inspector-go'),
  byId('inspector-output'),
)

function wireCourseIo(
  editor: CourseEditor,
  exportButton: HTMLButtonElement,
  importInput: HTMLInputElement,
): void {
  exportButton.addEventListener('click', () => exportCourse(editor.document()))
  importInput.addEventListener('change', async () => {
    const file = importInput.files?.[0]
    if (!file) return
    try {
      editor.load(await importCourse(file))
      refreshFromServer()
    } catch (error) {
      setStatus(`import failed: ${String(error)}`, true)
    } finally {
      importInput.value = ''
    }
  })
}

wireCourseIo(receivingEditor, byId('export-receiving'), byId('import-receiving'))
wireCourseIo(sendingEditor, byId('export-sending'), byId('import-sending'))

void (async () => {
  try {
    const health = await api.health()
    setStatus(`service ${health.status}, provider: ${health.provider_kind}`)
  } catch {
    setStatus('service unreachable; start it with `locredit serve --ui frontend/dist`',
      true)
  }
  await requestAssessment()
})()
