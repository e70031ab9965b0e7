import { beforeEach, describe, expect, it } from 'vitest'
import { CanvasModel } from '../src/model.js'
import { PanelModel } from '../src/panel.js'
import type { FitResponse, ModelDoc, ValidationReport } from '../src/types.js'
import { fixture } from './helpers.js'

const fit = fixture<FitResponse>('fit_response')

let model: CanvasModel
let panel: PanelModel
let becomesId: string

beforeEach(() => {
  model = CanvasModel.fromDocument(
    fixture<ModelDoc>('canvas_model_request') as ModelDoc)
  panel = new PanelModel()
  becomesId = model.relationships.find((r) => r.kind === 'Becomes')!.id
})

describe('fitted parameters in the panel', () => {
  it('fit values land in the model and are tagged "fitted"', () => {
    const tags = panel.applyFit(model, becomesId, fit.spec_inputs)
    expect(tags).toEqual([`${becomesId}.transmission_likelihood`])

    const state = panel.stateFor(model, becomesId)
    const field = state.fields.find((f) => f.name === 'transmission_likelihood')!
    expect(field.fitted).toBe(true)
    expect(field.value).toBe(fit.spec_inputs.transmission_likelihood)
    // untouched sibling parameter is not tagged
    expect(state.fields.find((f) => f.name === 'contacts_per_day')!.fitted)
      .toBe(false)
  })

  it('fits only bind to a Becomes relationship', () => {
    expect(() => panel.applyFit(model, model.components[0].id, fit.spec_inputs))
      .toThrow(/Becomes/)
  })

  it('editing a fitted value records a scenario override', () => {
    panel.applyFit(model, becomesId, fit.spec_inputs)
    const route = panel.edit(model, becomesId, 'transmission_likelihood', 0.03)
    expect(route).toBe('override')
    expect(panel.overrides.sets[becomesId].transmission_likelihood).toBe(0.03)
    // the model keeps the fitted value; the override applies at run time
    expect(model.element(becomesId)!.params.transmission_likelihood)
      .toBe(fit.spec_inputs.transmission_likelihood)

    const state = panel.stateFor(model, becomesId)
    const field = state.fields.find((f) => f.name === 'transmission_likelihood')!
    expect(field.overridden).toBe(true)
    expect(field.value).toBe(0.03) // panel shows the pending trial value
  })

  it('editing an unfitted value edits the model directly', () => {
    const route = panel.edit(model, becomesId, 'contacts_per_day', 12)
    expect(route).toBe('model')
    expect(model.element(becomesId)!.params.contacts_per_day).toBe(12)
    expect(panel.overrides.sets[becomesId]).toBeUndefined()
  })
})

describe('inline validation display', () => {
  it('panel shows only the selected element issues', () => {
    const report = fixture<ValidationReport>('validation_bad')
    expect(report.ok).toBe(false)
    const badComponent = report.issues.find((i) => i.severity === 'Error')!
    const state = panel.stateFor(model, badComponent.element_id!, report)
    expect(state.issues.length).toBeGreaterThan(0)
    expect(state.issues.every((i) => i.element_id === badComponent.element_id))
      .toBe(true)
  })

  it('clean models surface no issues', () => {
    const report = fixture<ValidationReport>('validation_ok')
    expect(report.ok).toBe(true)
    const state = panel.stateFor(model, becomesId, report)
    expect(state.issues).toEqual([])
  })
})
