/** Document shapes exchanged with the workbench API (docs/model.schema.json). */

export type ComponentKind =
  | 'Susceptible'
  | 'Infected'
  | 'Recovered'
  | 'Phenomenon'
  | 'Intervention'
  | 'HealthcareCapacity'

export type RelationshipKind = 'Becomes' | 'Recovers' | 'Inhibits' | 'SpreadsTo'

/** number = set, null = explicitly unset (the backend warns until filled) */
export type ParamValue = number | null
export type ParamMap = Record<string, ParamValue>

export interface ComponentDoc {
  id: string
  kind: ComponentKind
  name: string
  params: ParamMap
  x?: number
  y?: number
}

export interface RelationshipDoc {
  id: string
  kind: RelationshipKind
  source: string
  target: string
  params: ParamMap
}

export interface ModelDoc {
  schema_version: number
  id: string
  name: string
  notes?: string
  components: ComponentDoc[]
  relationships: RelationshipDoc[]
}

export interface ValidationIssue {
  severity: 'Error' | 'Warning'
  element_id: string | null
  message: string
}

export interface ValidationReport {
  ok: boolean
  issues: ValidationIssue[]
}

export interface OverridesDoc {
  sets: Record<string, Record<string, number>>
  horizon: number | null
  seed: number | null
}

export interface ScenarioDoc {
  id: string
  name: string
  model_id: string
  overrides: OverridesDoc
  run_ids: string[]
  created_at: string
}

export interface SpecDoc {
  id: string
  populations: Record<string, number>
  beta: number
  gamma: number
  capacity: number | null
  horizon: number
  dt_ode: number
  seed: number
  rng: string
  contact_structure: {
    contacts_per_day: number
    transmission_likelihood: number
    block_probability: number
  }
  phenomenon_rules: {
    duration: number
    transmission_count: number
    onset: number
    interval: number
    block_probability: number
    population: number
  } | null
}

export interface TrajectoryDoc {
  spec_ref: string
  kind: 'ABM' | 'ODE'
  times: number[]
  series: Record<string, number[]>
}

export interface RunMetricsDoc {
  peak_infected: number
  peak_day: number
  capacity_crossing_day: number | null
  exceedance_duration: number
  attack_rate: number | null
  r0_basic: number | null
}

export interface RunDoc {
  id: string
  scenario_id: string
  engine: 'abm' | 'ode'
  n_seeds: number
  status: 'completed' | 'failed'
  spec: SpecDoc
  trajectory?: TrajectoryDoc
  metrics?: RunMetricsDoc
  per_seed_metrics?: RunMetricsDoc[]
  error?: ApiErrorBody
  created_at: string
}

export interface FitDoc {
  growth_rate: number
  window: [string, string]
  beta_hat: number
  gamma_assumed: number
  r0_hat: number
  goodness: number
  warnings: string[]
}

export interface SpecInputsDoc {
  transmission_likelihood: number
  beta: number
  gamma: number
  warnings: string[]
}

export interface FitResponse {
  fit: FitDoc
  spec_inputs: SpecInputsDoc
}

export interface ComparisonReportDoc {
  scenario_ids: string[]
  metrics: Record<string, RunMetricsDoc>
  orderings: {
    by_peak: string[]
    by_peak_day: string[]
    by_crossing_day: string[]
  }
  flattened: boolean
}

export interface ApiErrorBody {
  code: string
  message: string
  details: Record<string, unknown>
}
