import { readFileSync } from 'node:fs'
import { join } from 'node:path'
import type { FetchLike } from '../src/api.js'

export interface Recorded {
  status: number
  body: unknown
}

export function fixture<T = unknown>(name: string): T {
  const raw = readFileSync(join(__dirname, 'fixtures', `${name}.json`), 'utf-8')
  const parsed = JSON.parse(raw)
  if (parsed && typeof parsed === 'object'
      && 'status' in parsed && 'body' in parsed) {
    return (parsed as Recorded).body as T
  }
  return parsed as T // raw documents (e.g. the canvas-built request)
}

export function recorded(name: string): Recorded {
  const raw = readFileSync(join(__dirname, 'fixtures', `${name}.json`), 'utf-8')
  return JSON.parse(raw) as Recorded
}

/** Fake fetch that replays recorded responses keyed by "METHOD path". */
export function replayFetch(routes: Record<string, Recorded>): FetchLike {
  return async (url, init) => {
    const key = `${init?.method ?? 'GET'} ${url}`
    const match = routes[key]
    if (!match) throw new Error(`no recorded response for: ${key}`)
    return {
      ok: match.status >= 200 && match.status < 300,
      status: match.status,
      statusText: String(match.status),
      json: async () => match.body,
    } as Response
  }
}
