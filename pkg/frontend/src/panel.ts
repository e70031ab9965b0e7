/** Parameter-panel state: fields for the selected element, fitted tags,
 * and the rule that edits to fitted values become scenario overrides. */
import { COMPONENT_PARAMS, RELATIONSHIP_PARAMS, CanvasModel } from './model.js'
import type {
  ComponentDoc,
  OverridesDoc,
  RelationshipDoc,
  SpecInputsDoc,
  ValidationIssue,
  ValidationReport,
} from './types.js'

export interface PanelField {
  name: string
  value: number | null
  /** filled from a dataset fit; edits are recorded as scenario overrides */
  fitted: boolean
  /** manual override queued for the next run */
  overridden: boolean
}

export interface PanelState {
  elementId: string | null
  title: string
  fields: PanelField[]
  issues: ValidationIssue[]
}

export class PanelModel {
  /** "elementId.param" entries currently marked as machine-filled */
  fittedTags = new Set<string>()
  /** queued scenario overrides (edits on fitted fields land here) */
  overrides: OverridesDoc = { sets: {}, horizon: null, seed: null }

  stateFor(model: CanvasModel, elementId: string | null,
           report?: ValidationReport): PanelState {
    if (elementId === null) {
      return { elementId: null, title: 'Nothing selected', fields: [],
               issues: report?.issues ?? [] }
    }
    const element = model.element(elementId)
    if (!element) {
      return { elementId: null, title: 'Nothing selected', fields: [],
               issues: [] }
    }
    const isRelationship = 'source' in element
    const names = isRelationship
      ? RELATIONSHIP_PARAMS[(element as RelationshipDoc).kind]
      : COMPONENT_PARAMS[(element as ComponentDoc).kind]
    const overridesHere = this.overrides.sets[elementId] ?? {}
    const fields = names.map((name) => ({
      name,
      value: name in overridesHere
        ? overridesHere[name]
        : element.params[name] ?? null,
      fitted: this.fittedTags.has(`${elementId}.${name}`),
      overridden: name in overridesHere,
    }))
    const title = isRelationship
      ? `${(element as RelationshipDoc).kind} relationship`
      : `${(element as ComponentDoc).name}`
    return {
      elementId,
      title,
      fields,
      issues: (report?.issues ?? []).filter((i) => i.element_id === elementId),
    }
  }

  /** Bind a dataset fit to the selected Becomes relationship. */
  applyFit(model: CanvasModel, becomesId: string,
           inputs: SpecInputsDoc): string[] {
    const element = model.element(becomesId)
    if (!element || !('source' in element)
        || (element as RelationshipDoc).kind !== 'Becomes') {
      throw new Error('select a Becomes relationship to receive the fit')
    }
    model.setParam(becomesId, 'transmission_likelihood',
                   inputs.transmission_likelihood)
    const tag = `${becomesId}.transmission_likelihood`
    this.fittedTags.add(tag)
    return [tag]
  }

  /** Record an edit; fitted fields become overrides, others edit the model. */
  edit(model: CanvasModel, elementId: string, name: string,
       value: number | null): 'model' | 'override' {
    if (this.fittedTags.has(`${elementId}.${name}`) && value !== null) {
      const sets = this.overrides.sets[elementId] ?? {}
      sets[name] = value
      this.overrides.sets[elementId] = sets
      return 'override'
    }
    model.setParam(elementId, name, value)
    return 'model'
  }

  clearOverrides(): void {
    this.overrides = { sets: {}, horizon: null, seed: null }
  }
}
