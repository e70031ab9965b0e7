/** Typed client for the workbench HTTP API.
 *
 * The UI computes no dynamics: every displayed number comes out of these
 * response documents (the contract tests replay recorded responses through
 * this client).
 */
import type {
  ApiErrorBody,
  ComparisonReportDoc,
  FitResponse,
  ModelDoc,
  RunDoc,
  ScenarioDoc,
  TrajectoryDoc,
  ValidationReport,
} from './types.js'

export class ApiError extends Error {
  code: string
  details: Record<string, unknown>

  constructor(status: number, body: ApiErrorBody) {
    super(body.message || `request failed (${status})`)
    this.code = body.code || 'error'
    this.details = body.details || {}
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>

export class ApiClient {
  constructor(
    private base = '',
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown,
                           contentType = 'application/json'): Promise<T> {
    const init: RequestInit = { method, headers: {} }
    if (body !== undefined) {
      init.headers = { 'content-type': contentType }
      init.body = contentType === 'application/json'
        ? JSON.stringify(body) : (body as BodyInit)
    }
    const response = await this.fetchImpl(this.base + path, init)
    if (!response.ok) {
      let errorBody: ApiErrorBody
      try {
        errorBody = await response.json() as ApiErrorBody
      } catch {
        errorBody = { code: 'error', message: response.statusText, details: {} }
      }
      throw new ApiError(response.status, errorBody)
    }
    if (response.status === 204) return undefined as T
    return await response.json() as T
  }

  health(): Promise<{ status: string; version: string }> {
    return this.request('GET', '/api/health')
  }

  // models
  createModel(doc: ModelDoc): Promise<{ id: string; warnings: string[] }> {
    return this.request('POST', '/api/models', doc)
  }

  listModels(): Promise<{ models: ModelDoc[] }> {
    return this.request('GET', '/api/models')
  }

  getModel(id: string): Promise<ModelDoc> {
    return this.request('GET', `/api/models/${id}`)
  }

  deleteModel(id: string): Promise<void> {
    return this.request('DELETE', `/api/models/${id}`)
  }

  validateDocument(doc: ModelDoc): Promise<ValidationReport> {
    return this.request('POST', '/api/validate', doc)
  }

  // datasets
  uploadDatasetCsv(csv: string | Blob):
      Promise<{ ids: string[]; warnings: string[] }> {
    return this.request('POST', '/api/datasets', csv, 'text/csv')
  }

  fitDataset(id: string, options: { gamma?: number; contacts?: number;
             min_cases?: number; max_window?: number } = {}):
      Promise<FitResponse> {
    return this.request('POST', `/api/datasets/${id}/fit`, options)
  }

  // scenarios and runs
  createScenario(body: { name: string; model_id: string;
                 overrides?: Partial<ScenarioDoc['overrides']> }):
      Promise<{ id: string }> {
    return this.request('POST', '/api/scenarios', body)
  }

  runScenario(id: string, engine: 'abm' | 'ode', seeds?: number):
      Promise<{ id: string; status: string }> {
    const query = seeds === undefined ? '' : `&seeds=${seeds}`
    return this.request('POST',
      `/api/scenarios/${id}/runs?engine=${engine}${query}`)
  }

  getRun(id: string): Promise<RunDoc> {
    return this.request('GET', `/api/runs/${id}`)
  }

  getRunSeries(id: string): Promise<TrajectoryDoc> {
    return this.request('GET', `/api/runs/${id}/series?format=json`)
  }

  compare(scenarioIds: string[]): Promise<ComparisonReportDoc> {
    return this.request('POST', '/api/compare', { scenario_ids: scenarioIds })
  }
}
