/**
 * Verb inspector: ask the service where a verb lands on the competency
 * scale and draw its six silhouette bars (or a seed badge).
 */

import { ApiClient, ApiError } from './api.js'

const LEVEL_NAMES = ['Remember', 'Understand', 'Apply', 'Analyze', 'Evaluate', 'Create']

export function wireInspector(
  api: ApiClient,
  input: HTMLInputElement,
  button: HTMLButtonElement,
  output: HTMLElement,
): void {
  const run = async () => {
    const verb = input.value.trim()
    output.textContent = ''
    if (!verb) {
      showMessage(output, 'Type a verb first.', true)
      return
    }
    button.disabled = true
    try {
      const result = await api.classifyVerb(verb)
      renderAssignment(output, result.verb, result.level, result.method,
        result.silhouette_scores)
    } catch (error) {
      const message =
        error instanceof ApiError
          ? `Cannot place this verb: ${error.message}`
          : `Request failed: ${String(error)}`
      showMessage(output, message, true)
    } finally {
      button.disabled = false
    }
  }
  button.addEventListener('click', () => void run())
  input.addEventListener('keydown', (event) => {
    if (event.key === 'Enter') void run()
  })
}

function showMessage(output: HTMLElement, text: string, isError: boolean): void {
  const note = document.createElement('div')
  note.className = isError ? 'inspector-error' : 'inspector-note'
  note.textContent = text
  output.appendChild(note)
}

function renderAssignment(
  output: HTMLElement,
  verb: string,
  level: number,
  method: 'seed' | 'silhouette',
  scores: (number | null)[] | null,
): void {
  const headline = document.createElement('div')
  headline.className = 'inspector-headline'
  headline.textContent = `"${verb}" → level ${level} (${LEVEL_NAMES[level - 1]})`
  output.appendChild(headline)

  if (method === 'seed' || !scores) {
    const badge = document.createElement('span')
    badge.className = 'seed-badge'
    badge.textContent = 'illustrative verb (direct match)'
    output.appendChild(badge)
    return
  }

  scores.forEach((score, index) => {
    const row = document.createElement('div')
    row.className = 'bar-row'
    const label = document.createElement('span')
    label.className = 'bar-label'
    label.textContent = `L${index + 1} ${LEVEL_NAMES[index]}`
    row.appendChild(label)

    const track = document.createElement('div')
    track.className = 'bar-track'
    if (score === null) {
      track.classList.add('bar-missing')
      track.title = 'cluster not scorable for this verb'
    } else {
      const fill = document.createElement('div')
      fill.className = 'bar-fill'
      if (index + 1 === level) fill.classList.add('bar-winner')
      // silhouette widths live in [-1, 1]
      fill.style.width = `${Math.round(((score + 1) / 2) * 100)}%`
      fill.textContent = score.toFixed(3)
      track.appendChild(fill)
    }
    row.appendChild(track)
    output.appendChild(row)
  })
}
