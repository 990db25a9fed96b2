/**
 * Editable outcome lists for the two courses, plus import/export in the
 * engine's course-document format (the same JSON the CLI consumes).
 */

import type { CourseDoc } from './api.js'
import type { OutcomeDiagnostics } from './decision.js'

const LEVEL_NAMES = ['Remember', 'Understand', 'Apply', 'Analyze', 'Evaluate', 'Create']

export interface EditorCallbacks {
  onChange: () => void
}

export class CourseEditor {
  private course: CourseDoc
  private diagnostics = new Map<string, OutcomeDiagnostics>()
  private counter = 0

  constructor(
    private readonly container: HTMLElement,
    private readonly role: 'receiving' | 'sending',
    initial: CourseDoc,
    private readonly callbacks: EditorCallbacks,
  ) {
    this.course = structuredClone(initial)
    this.counter = initial.learning_outcomes.length
    this.render()
  }

  document(): CourseDoc {
    return structuredClone(this.course)
  }

  load(doc: CourseDoc): void {
    if (doc.role !== this.role) {
      throw new Error(`document is labeled '${doc.role}', expected '${this.role}'`)
    }
    this.course = structuredClone(doc)
    this.counter = doc.learning_outcomes.length
    this.diagnostics.clear()
    this.render()
  }

  applyDiagnostics(reports: OutcomeDiagnostics[]): void {
    this.diagnostics = new Map(reports.map((r) => [r.outcome_id, r]))
    this.render()
  }

  private render(): void {
    this.container.textContent = ''

    const title = document.createElement('div')
    title.className = 'course-title'
    const idInput = document.createElement('input')
    idInput.value = this.course.course_id
    idInput.className = 'course-id'
    idInput.addEventListener('change', () => {
      this.course.course_id = idInput.value.trim() || this.course.course_id
      this.callbacks.onChange()
    })
    title.appendChild(idInput)
    this.container.appendChild(title)

    this.course.learning_outcomes.forEach((lo, index) => {
      const row = document.createElement('div')
      row.className = 'lo-row'

      const text = document.createElement('textarea')
      text.value = lo.text
      text.rows = 2
      text.addEventListener('change', () => {
        lo.text = text.value
        this.callbacks.onChange()
      })
      row.appendChild(text)

      const side = document.createElement('div')
      side.className = 'lo-side'
      side.appendChild(this.badge(lo.id))
      const remove = document.createElement('button')
      remove.textContent = '✕'
      remove.title = 'remove outcome'
      remove.disabled = this.course.learning_outcomes.length <= 1
      remove.addEventListener('click', () => {
        this.course.learning_outcomes.splice(index, 1)
        this.render()
        this.callbacks.onChange()
      })
      side.appendChild(remove)
      row.appendChild(side)

      this.container.appendChild(row)
    })

    const add = document.createElement('button')
    add.textContent = '+ outcome'
    add.className = 'add-lo'
    add.addEventListener('click', () => {
      this.counter += 1
      this.course.learning_outcomes.push({
        id: `${this.course.course_id}-lo${this.counter}`,
        text: 'Describe the new outcome here',
      })
      this.render()
      this.callbacks.onChange()
    })
    this.container.appendChild(add)
  }

  private badge(outcomeId: string): HTMLElement {
    const report = this.diagnostics.get(outcomeId)
    const badge = document.createElement('span')
    badge.className = 'level-badge'
    if (!report) {
      badge.textContent = '…'
      badge.title = 'no assessment yet'
    } else if (report.level === null) {
      badge.textContent = 'n/a'
      badge.classList.add('unassigned')
      badge.title = 'no assignable verb found; grid cells use the neutral 0.5'
    } else {
      badge.textContent = `L${report.level} ${LEVEL_NAMES[report.level - 1]}`
      badge.classList.add(`level-${report.level}`)
      badge.title = report.assignments
        .map((a) => `${a.verb}: level ${a.level} (${a.method})`)
        .join('\n')
    }
    return badge
  }
}

export function exportCourse(doc: CourseDoc): void {
  const blob = new Blob([JSON.stringify(doc, null, 2) + '\n'], {
    type: 'application/json',
  })
  const link = document.createElement('a')
  link.href = URL.createObjectURL(blob)
  link.download = `${doc.course_id}-${doc.role}.json`
  link.click()
  URL.revokeObjectURL(link.href)
}

export async function importCourse(file: File): Promise<CourseDoc> {
  const parsed = JSON.parse(await file.text()) as CourseDoc
  if (!parsed.course_id || !Array.isArray(parsed.learning_outcomes)) {
    throw new Error('not a course document (need course_id and learning_outcomes)')
  }
  return parsed
}
