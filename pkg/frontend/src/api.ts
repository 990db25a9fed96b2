/**
 * Typed client for the assessment service.  At most one /assess request is
 * in flight; a newer call aborts the older one (latest wins).
 */

import type { AssessConfig, AssessResponse } from './decision.js'

export interface OutcomeDoc {
  id: string
  text: string
}

export interface CourseDoc {
  course_id: string
  role: 'receiving' | 'sending'
  learning_outcomes: OutcomeDoc[]
}

export interface ClassifyResponse {
  verb: string
  level: number
  level_name: string
  method: 'seed' | 'silhouette'
  silhouette_scores: (number | null)[] | null
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === 'string' ? detail : JSON.stringify(detail))
  }
}

export const ABORTED = Symbol('request superseded')

async function parseError(response: Response): Promise<ApiError> {
  let detail: unknown = response.statusText
  try {
    const body = (await response.json()) as { detail?: unknown }
    if (body && body.detail !== undefined) detail = body.detail
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail)
}

export class ApiClient {
  private inflightAssess: AbortController | null = null

  constructor(readonly base: string = '') {}

  /** POST /assess; resolves to ABORTED when a newer call supersedes it. */
  async assess(
    receiving: CourseDoc,
    sending: CourseDoc,
    config: AssessConfig,
  ): Promise<AssessResponse | typeof ABORTED> {
    this.inflightAssess?.abort()
    const controller = new AbortController()
    this.inflightAssess = controller
    try {
      const response = await fetch(`${this.base}/assess`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ receiving, sending, config }),
        signal: controller.signal,
      })
      if (!response.ok) throw await parseError(response)
      return (await response.json()) as AssessResponse
    } catch (error) {
      if (error instanceof DOMException && error.name === 'AbortError') {
        return ABORTED
      }
      throw error
    } finally {
      if (this.inflightAssess === controller) this.inflightAssess = null
    }
  }

  async classifyVerb(verb: string): Promise<ClassifyResponse> {
    const response = await fetch(`${this.base}/classify-verb`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ verb }),
    })
    if (!response.ok) throw await parseError(response)
    return (await response.json()) as ClassifyResponse
  }

  async health(): Promise<{ status: string; provider_kind: string | null }> {
    const response = await fetch(`${this.base}/health`)
    if (!response.ok) throw await parseError(response)
    return (await response.json()) as { status: string; provider_kind: string | null }
  }
}

export function debounced<Args extends unknown[]>(
  delayMs: number,
  fn: (...args: Args) => void,
): (...args: Args) => void {
  let timer: ReturnType<typeof setTimeout> | undefined
  return (...args: Args) => {
    if (timer !== undefined) clearTimeout(timer)
    timer = setTimeout(() => fn(...args), delayMs)
  }
}
