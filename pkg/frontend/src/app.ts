/** Single-page workbench client: editor, run controls, charts, comparison. */
import { ApiClient, ApiError } from './api.js'
import {
  metricsPeakOrder,
  overlayView,
  renderChartSvg,
  singleRunView,
} from './charts.js'
import { COMPONENT_KINDS, CanvasModel } from './model.js'
import { PanelModel } from './panel.js'
import type {
  ComponentKind,
  RunDoc,
  RunMetricsDoc,
  ValidationReport,
} from './types.js'

const api = new ApiClient('')

interface CompletedRun {
  label: string
  scenarioId: string
  run: RunDoc
}

const state = {
  model: CanvasModel.blank('SIR model'),
  savedModelId: null as string | null,
  selected: null as string | null,
  connectFrom: null as string | null,
  report: null as ValidationReport | null,
  panel: new PanelModel(),
  runs: [] as CompletedRun[],
  overlay: [] as CompletedRun[],
  datasetId: null as string | null,
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id)
  if (!node) throw new Error(`missing #${id}`)
  return node as T
}

function banner(message: string, kind: 'error' | 'info' = 'error'): void {
  const node = el<HTMLDivElement>('banner')
  node.textContent = message
  node.className = `banner banner-${kind}`
  node.hidden = false
  window.setTimeout(() => { node.hidden = true }, 6000)
}

function offline(err: unknown): void {
  if (err instanceof ApiError) {
    banner(`${err.code}: ${err.message}`)
  } else {
    banner('backend unreachable; edits are kept locally', 'error')
  }
}

// --- canvas -----------------------------------------------------------------

const NODE_W = 132
const NODE_H = 44

function componentCenter(id: string): { x: number; y: number } {
  const c = state.model.components.find((n) => n.id === id)
  return { x: (c?.x ?? 100) + NODE_W / 2, y: (c?.y ?? 100) + NODE_H / 2 }
}

function edgeAnchor(targetId: string): { x: number; y: number } {
  const asComponent = state.model.components.find((n) => n.id === targetId)
  if (asComponent) return componentCenter(targetId)
  const rel = state.model.relationships.find((r) => r.id === targetId)
  if (!rel) return { x: 0, y: 0 }
  const a = componentCenter(rel.source)
  const b = edgeAnchor(rel.target)
  return { x: (a.x + b.x) / 2, y: (a.y + b.y) / 2 }
}

function issueClassFor(id: string): string {
  const issues = state.report?.issues.filter((i) => i.element_id === id) ?? []
  if (issues.some((i) => i.severity === 'Error')) return ' has-error'
  if (issues.length > 0) return ' has-warning'
  return ''
}

function renderCanvas(): void {
  const svg = el<HTMLElement>('canvas-svg')
  const parts: string[] = []
  parts.push('<defs><marker id="arrow" viewBox="0 0 8 8" refX="7" refY="4" '
    + 'markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
    + '<path d="M 0 0 L 8 4 L 0 8 z" fill="#555"/></marker></defs>')
  for (const rel of state.model.relationships) {
    const from = componentCenter(rel.source)
    const to = edgeAnchor(rel.target)
    const mx = (from.x + to.x) / 2
    const my = (from.y + to.y) / 2
    const selected = state.selected === rel.id ? ' selected' : ''
    parts.push(`<g class="edge${selected}${issueClassFor(rel.id)}" data-id="${rel.id}">`
      + `<line x1="${from.x}" y1="${from.y}" x2="${to.x}" y2="${to.y}" `
      + 'marker-end="url(#arrow)"/>'
      + `<text x="${mx}" y="${my - 6}">${rel.kind}</text></g>`)
  }
  for (const c of state.model.components) {
    const x = c.x ?? 100
    const y = c.y ?? 100
    const selected = state.selected === c.id ? ' selected' : ''
    const connecting = state.connectFrom === c.id ? ' connect-from' : ''
    parts.push(`<g class="node kind-${c.kind}${selected}${connecting}`
      + `${issueClassFor(c.id)}" data-id="${c.id}" transform="translate(${x},${y})">`
      + `<rect width="${NODE_W}" height="${NODE_H}" rx="8"/>`
      + `<text x="${NODE_W / 2}" y="18" class="node-name">${c.name}</text>`
      + `<text x="${NODE_W / 2}" y="34" class="node-kind">${c.kind}</text></g>`)
  }
  svg.innerHTML = parts.join('')
  attachCanvasHandlers(svg)
}

function attachCanvasHandlers(svg: HTMLElement): void {
  for (const node of Array.from(svg.querySelectorAll<SVGGElement>('g.node'))) {
    const id = node.dataset.id as string
    node.addEventListener('mousedown', (event) => startDrag(event, id))
    node.addEventListener('click', (event) => {
      event.stopPropagation()
      onElementClick(id)
    })
  }
  for (const edge of Array.from(svg.querySelectorAll<SVGGElement>('g.edge'))) {
    edge.addEventListener('click', (event) => {
      event.stopPropagation()
      onElementClick(edge.dataset.id as string)
    })
  }
}

function onElementClick(id: string): void {
  if (state.connectFrom && state.connectFrom !== id) {
    const result = state.model.connect(state.connectFrom, id)
    state.connectFrom = null
    if ('error' in result) {
      banner(result.error)
    } else {
      state.selected = result.relationship.id
    }
    refresh({ validate: true })
    return
  }
  state.connectFrom = null
  state.selected = id
  refresh()
}

let drag: { id: string; dx: number; dy: number } | null = null

function startDrag(event: MouseEvent, id: string): void {
  const c = state.model.components.find((n) => n.id === id)
  if (!c) return
  const pt = canvasPoint(event)
  drag = { id, dx: pt.x - (c.x ?? 0), dy: pt.y - (c.y ?? 0) }
}

function canvasPoint(event: MouseEvent): { x: number; y: number } {
  const rect = el('canvas-svg').getBoundingClientRect()
  return { x: event.clientX - rect.left, y: event.clientY - rect.top }
}

function wireCanvas(): void {
  const svg = el('canvas-svg')
  svg.addEventListener('mousemove', (event) => {
    if (!drag) return
    const pt = canvasPoint(event as MouseEvent)
    state.model.moveComponent(drag.id,
      Math.round(pt.x - drag.dx), Math.round(pt.y - drag.dy))
    renderCanvas()
  })
  svg.addEventListener('mouseup', () => { drag = null })
  svg.addEventListener('click', () => {
    state.selected = null
    state.connectFrom = null
    refresh()
  })
}

// --- palette ------------------------------------------------------------------

function renderPalette(): void {
  const host = el('palette-items')
  host.innerHTML = ''
  for (const kind of COMPONENT_KINDS) {
    const button = document.createElement('button')
    button.className = `palette-item kind-${kind}`
    button.textContent = kind
    button.addEventListener('click', () => {
      const n = state.model.components.length
      const c = state.model.addComponent(kind as ComponentKind,
        60 + (n % 3) * 180, 60 + Math.floor(n / 3) * 110)
      state.selected = c.id
      refresh({ validate: true })
    })
    host.appendChild(button)
  }
  const connect = document.createElement('button')
  connect.className = 'palette-item palette-connect'
  connect.textContent = 'Connect (pick source, then target)'
  connect.addEventListener('click', () => {
    if (state.selected) {
      state.connectFrom = state.selected
      banner('now click the target element', 'info')
      renderCanvas()
    } else {
      banner('select the source element first', 'info')
    }
  })
  host.appendChild(connect)
}

// --- parameter panel -----------------------------------------------------------

function renderPanel(): void {
  const host = el('panel-body')
  const panelState = state.panel.stateFor(state.model, state.selected,
    state.report ?? undefined)
  const rows: string[] = [`<h3>${panelState.title}</h3>`]
  for (const field of panelState.fields) {
    const tags = [
      field.fitted ? '<span class="tag tag-fitted">fitted</span>' : '',
      field.overridden ? '<span class="tag tag-override">override</span>' : '',
    ].join('')
    rows.push(`<label class="field">`
      + `<span>${field.name.replaceAll('_', ' ')}${tags}</span>`
      + `<input type="number" step="any" data-field="${field.name}" `
      + `value="${field.value ?? ''}" placeholder="unset"/></label>`)
  }
  if (panelState.elementId) {
    rows.push(`<button id="delete-element" class="danger">Delete element</button>`)
  }
  const issues = panelState.issues.length > 0
    ? panelState.issues
    : (state.selected === null ? state.report?.issues ?? [] : [])
  if (issues.length > 0) {
    rows.push('<h4>Validation</h4>')
    for (const issue of issues) {
      rows.push(`<div class="issue issue-${issue.severity.toLowerCase()}">`
        + `${issue.element_id ? `<b>${issue.element_id}</b>: ` : ''}`
        + `${issue.message}</div>`)
    }
  }
  host.innerHTML = rows.join('')

  for (const input of Array.from(
      host.querySelectorAll<HTMLInputElement>('input[data-field]'))) {
    input.addEventListener('change', () => {
      if (!panelState.elementId) return
      const raw = input.value.trim()
      const value = raw === '' ? null : Number(raw)
      try {
        const kind = state.panel.edit(state.model, panelState.elementId,
          input.dataset.field as string, value)
        if (kind === 'override') {
          banner('recorded as a scenario override for the next run', 'info')
        }
      } catch (err) {
        banner(String(err))
      }
      refresh({ validate: true })
    })
  }
  const deleteButton = host.querySelector<HTMLButtonElement>('#delete-element')
  deleteButton?.addEventListener('click', () => {
    if (panelState.elementId) {
      state.model.remove(panelState.elementId)
      state.selected = null
      refresh({ validate: true })
    }
  })
}

// --- validation (inline, via the backend) ----------------------------------------

let validateTimer: number | undefined

function scheduleValidation(): void {
  window.clearTimeout(validateTimer)
  validateTimer = window.setTimeout(async () => {
    try {
      state.report = await api.validateDocument(state.model.toDocument())
    } catch (err) {
      if (!(err instanceof ApiError)) return offline(err)
      state.report = null
    }
    renderCanvas()
    renderPanel()
    el('save-model').toggleAttribute('disabled',
      state.report !== null && !state.report.ok)
  }, 250)
}

// --- runs and charts ---------------------------------------------------------------

function metricsTable(metrics: RunMetricsDoc): string {
  const crossing = metrics.capacity_crossing_day === null
    ? 'never' : `day ${metrics.capacity_crossing_day.toFixed(1)}`
  return `<table class="metrics"><tbody>`
    + `<tr><td>peak infected</td><td>${metrics.peak_infected.toFixed(0)}</td></tr>`
    + `<tr><td>peak day</td><td>${metrics.peak_day.toFixed(1)}</td></tr>`
    + `<tr><td>capacity crossed</td><td>${crossing}</td></tr>`
    + `<tr><td>days over capacity</td><td>${metrics.exceedance_duration.toFixed(1)}</td></tr>`
    + (metrics.attack_rate !== null
      ? `<tr><td>attack rate</td><td>${(metrics.attack_rate * 100).toFixed(1)}%</td></tr>` : '')
    + (metrics.r0_basic !== null
      ? `<tr><td>R0</td><td>${metrics.r0_basic.toFixed(2)}</td></tr>` : '')
    + '</tbody></table>'
}

async function saveModel(): Promise<string> {
  const created = await api.createModel(state.model.toDocument())
  state.savedModelId = created.id
  return created.id
}

async function runCurrentModel(): Promise<void> {
  const engine = el<HTMLSelectElement>('engine-select').value as 'abm' | 'ode'
  const seeds = Number(el<HTMLInputElement>('seeds-input').value) || undefined
  try {
    const modelId = await saveModel()
    const label = `${state.model.name} / ${engine}`
      + (Object.keys(state.panel.overrides.sets).length > 0 ? ' (revised)' : '')
    const scenario = await api.createScenario({
      name: label, model_id: modelId, overrides: state.panel.overrides,
    })
    const started = await api.runScenario(scenario.id, engine,
      engine === 'abm' ? seeds : undefined)
    const run = await api.getRun(started.id)
    if (run.status === 'failed') {
      banner(`run failed: ${run.error?.message ?? 'engine error'}`)
      return
    }
    state.runs.push({ label, scenarioId: scenario.id, run })
    state.overlay = [state.runs[state.runs.length - 1]]
    renderResults()
    renderRunList()
  } catch (err) {
    offline(err)
  }
}

function capacityOf(run: RunDoc): number | null {
  return run.spec.capacity
}

function renderResults(): void {
  const host = el('chart-host')
  if (state.overlay.length === 0) {
    host.innerHTML = '<p class="hint">Run the model to see results here.</p>'
    el('metrics-host').innerHTML = ''
    return
  }
  const capacity = capacityOf(state.overlay[0].run)
  if (state.overlay.length === 1) {
    const { run } = state.overlay[0]
    host.innerHTML = renderChartSvg(
      singleRunView(run.trajectory!, capacity))
      + legendFor(state.overlay)
    el('metrics-host').innerHTML = metricsTable(run.metrics!)
  } else {
    const view = overlayView(state.overlay.map((r) => ({
      label: r.label, trajectory: r.run.trajectory!,
    })), capacity)
    host.innerHTML = renderChartSvg(view) + legendFor(state.overlay)
    el('metrics-host').innerHTML = state.overlay
      .map((r) => `<h4>${r.label}</h4>${metricsTable(r.run.metrics!)}`)
      .join('')
  }
}

function legendFor(runs: CompletedRun[]): string {
  if (runs.length <= 1) return ''
  const colors = ['#d04a4a', '#d0924a', '#8a6fc9', '#4a7bd0', '#4aa86c']
  return '<div class="legend">' + runs.map((r, i) =>
    `<span><i style="background:${colors[i % colors.length]}"></i>`
    + `${r.label}</span>`).join('') + '</div>'
}

function renderRunList(): void {
  const host = el('run-list')
  if (state.runs.length === 0) {
    host.innerHTML = ''
    return
  }
  const rows = state.runs.map((r, i) => {
    const checked = state.overlay.includes(r) ? 'checked' : ''
    return `<label class="run-row"><input type="checkbox" data-run="${i}" `
      + `${checked}/> ${r.label} <span class="muted">peak `
      + `${r.run.metrics?.peak_infected.toFixed(0) ?? '?'}</span></label>`
  })
  host.innerHTML = '<h4>Completed runs (tick to overlay)</h4>' + rows.join('')
  for (const box of Array.from(
      host.querySelectorAll<HTMLInputElement>('input[data-run]'))) {
    box.addEventListener('change', () => {
      const selected = Array.from(
        host.querySelectorAll<HTMLInputElement>('input[data-run]:checked'))
        .map((b) => state.runs[Number(b.dataset.run)])
      state.overlay = selected
      renderResults()
    })
  }
}

// --- data import and fitting ----------------------------------------------------

async function importAndFit(): Promise<void> {
  const fileInput = el<HTMLInputElement>('csv-file')
  const file = fileInput.files?.[0]
  if (!file) {
    banner('choose a CSV file first', 'info')
    return
  }
  const gamma = Number(el<HTMLInputElement>('fit-gamma').value) || 1 / 14
  const contacts = Number(el<HTMLInputElement>('fit-contacts').value) || 16
  try {
    const uploaded = await api.uploadDatasetCsv(file)
    if (uploaded.ids.length === 0) {
      banner('no usable rows in that file')
      return
    }
    state.datasetId = uploaded.ids[0]
    const response = await api.fitDataset(state.datasetId, { gamma, contacts })
    const becomes = state.model.relationships.find((r) =>
      r.id === state.selected && r.kind === 'Becomes')
      ?? state.model.relationships.find((r) => r.kind === 'Becomes')
    if (!becomes) {
      banner('add a Becomes relationship to receive the fitted parameters')
      return
    }
    state.panel.applyFit(state.model, becomes.id, response.spec_inputs)
    state.selected = becomes.id
    const warnings = [...response.fit.warnings,
                      ...response.spec_inputs.warnings]
    banner(`fitted growth ${response.fit.growth_rate.toFixed(4)}/day, `
      + `likelihood ${response.spec_inputs.transmission_likelihood.toFixed(4)}`
      + (warnings.length > 0 ? ` (${warnings.join('; ')})` : ''), 'info')
    refresh({ validate: true })
  } catch (err) {
    offline(err)
  }
}

// --- toolbar -----------------------------------------------------------------------

async function loadModelList(): Promise<void> {
  try {
    const { models } = await api.listModels()
    const select = el<HTMLSelectElement>('model-select')
    select.innerHTML = '<option value="">load saved model...</option>'
      + models.map((m) => `<option value="${m.id}">${m.name} (${m.id.slice(0, 18)})</option>`)
        .join('')
  } catch (err) {
    offline(err)
  }
}

function wireToolbar(): void {
  el('save-model').addEventListener('click', async () => {
    try {
      const id = await saveModel()
      banner(`saved as ${id}`, 'info')
      await loadModelList()
    } catch (err) {
      offline(err)
    }
  })
  el<HTMLSelectElement>('model-select').addEventListener('change', async (event) => {
    const id = (event.target as HTMLSelectElement).value
    if (!id) return
    try {
      const doc = await api.getModel(id)
      state.model = CanvasModel.fromDocument(doc)
      state.savedModelId = id
      state.panel = new PanelModel()
      state.selected = null
      refresh({ validate: true })
    } catch (err) {
      offline(err)
    }
  })
  el('run-model').addEventListener('click', () => { void runCurrentModel() })
  el('revise-model').addEventListener('click', () => {
    // re-open the panel pre-filled for the next trial
    const becomes = state.model.relationships.find((r) => r.kind === 'Becomes')
    state.selected = becomes?.id ?? state.selected
    refresh()
    banner('adjust parameters, then run another trial', 'info')
  })
  el('fit-button').addEventListener('click', () => { void importAndFit() })
  el('new-model').addEventListener('click', () => {
    state.model = CanvasModel.blank('Untitled model')
    state.panel = new PanelModel()
    state.selected = null
    state.savedModelId = null
    refresh({ validate: true })
  })
  el<HTMLInputElement>('model-name').addEventListener('change', (event) => {
    state.model.name = (event.target as HTMLInputElement).value
  })
}

// --- top-level ------------------------------------------------------------------------

function refresh(options: { validate?: boolean } = {}): void {
  el<HTMLInputElement>('model-name').value = state.model.name
  renderCanvas()
  renderPanel()
  if (options.validate) scheduleValidation()
}

function start(): void {
  renderPalette()
  wireCanvas()
  wireToolbar()
  refresh({ validate: true })
  void loadModelList()
  void api.health().catch(() => {
    banner('backend unreachable; edits are kept locally')
  })
}

document.addEventListener('DOMContentLoaded', start)

// exported for the tests
export { metricsPeakOrder, state }
