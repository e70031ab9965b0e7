/** Canvas-side model state.
 *
 * Mirrors the backend document exactly (plus x/y layout hints, which the
 * backend stores but ignores), so saving is always `toDocument()` and the
 * UI never invents semantics of its own.  Pure data, no DOM.
 */
import type {
  ComponentDoc,
  ComponentKind,
  ModelDoc,
  ParamMap,
  ParamValue,
  RelationshipDoc,
  RelationshipKind,
} from './types.js'

export const COMPONENT_KINDS: ComponentKind[] = [
  'Susceptible', 'Infected', 'Recovered', 'Phenomenon', 'Intervention',
  'HealthcareCapacity',
]

/** Applicable parameters per component kind (matches the backend schema). */
export const COMPONENT_PARAMS: Record<ComponentKind, string[]> = {
  Susceptible: ['starting_count'],
  Infected: ['starting_count'],
  Recovered: ['starting_count'],
  Phenomenon: ['starting_count', 'duration', 'transmission_count',
               'transmission_onset', 'transmission_interval'],
  Intervention: ['interaction_probability'],
  HealthcareCapacity: ['capacity'],
}

export const RELATIONSHIP_PARAMS: Record<RelationshipKind, string[]> = {
  Becomes: ['contacts_per_day', 'transmission_likelihood'],
  Recovers: ['recovery_time'],
  Inhibits: ['block_probability'],
  SpreadsTo: [],
}

const KIND_LABELS: Record<ComponentKind, string> = {
  Susceptible: 'Susceptible',
  Infected: 'Infected',
  Recovered: 'Recovered',
  Phenomenon: 'Phenomenon',
  Intervention: 'Intervention',
  HealthcareCapacity: 'Healthcare Capacity',
}

function blankParams(names: string[]): ParamMap {
  const params: ParamMap = {}
  for (const name of names) params[name] = null
  return params
}

/** The relationship kind the given endpoints admit, or an explanation. */
export function relationshipKindFor(
  source: ComponentDoc,
  target: ComponentDoc | RelationshipDoc,
): { kind: RelationshipKind } | { error: string } {
  const targetIsRelationship = 'source' in target
  if (source.kind === 'HealthcareCapacity') {
    return { error: 'healthcare capacity cannot have outgoing relationships' }
  }
  if (source.kind === 'Intervention') {
    if (targetIsRelationship) {
      if ((target as RelationshipDoc).kind === 'Becomes') {
        return { kind: 'Inhibits' }
      }
      return { error: 'an intervention may only inhibit a Becomes flow' }
    }
    if ((target as ComponentDoc).kind === 'Phenomenon') {
      return { kind: 'Inhibits' }
    }
    return { error: 'an intervention inhibits a phenomenon or a Becomes flow' }
  }
  if (targetIsRelationship) {
    return { error: 'only interventions may target a relationship' }
  }
  const targetKind = (target as ComponentDoc).kind
  if (source.kind === 'Susceptible' && targetKind === 'Infected') {
    return { kind: 'Becomes' }
  }
  if (source.kind === 'Infected' && targetKind === 'Recovered') {
    return { kind: 'Recovers' }
  }
  if (source.kind === 'Phenomenon' && source.id === (target as ComponentDoc).id) {
    return { kind: 'SpreadsTo' }
  }
  return { error: `no relationship connects ${source.kind} to ${targetKind}` }
}

export class CanvasModel {
  schemaVersion = 1
  id: string
  name: string
  notes?: string
  components: ComponentDoc[] = []
  relationships: RelationshipDoc[] = []
  private counter = 0

  constructor(id: string, name: string) {
    this.id = id
    this.name = name
  }

  static blank(name = 'Untitled model'): CanvasModel {
    const id = `model-${Date.now().toString(16).padStart(16, '0')}-local`
    return new CanvasModel(id, name)
  }

  static fromDocument(doc: ModelDoc): CanvasModel {
    const model = new CanvasModel(doc.id, doc.name)
    model.schemaVersion = doc.schema_version
    model.notes = doc.notes
    model.components = doc.components.map((c) => ({ ...c, params: { ...c.params } }))
    model.relationships = doc.relationships.map((r) => ({ ...r, params: { ...r.params } }))
    model.counter = doc.components.length + doc.relationships.length
    return model
  }

  toDocument(): ModelDoc {
    const doc: ModelDoc = {
      schema_version: this.schemaVersion,
      id: this.id,
      name: this.name,
      components: this.components.map((c) => {
        const out: ComponentDoc = {
          id: c.id, kind: c.kind, name: c.name, params: { ...c.params },
        }
        if (c.x !== undefined) out.x = c.x
        if (c.y !== undefined) out.y = c.y
        return out
      }),
      relationships: this.relationships.map((r) => ({
        id: r.id, kind: r.kind, source: r.source, target: r.target,
        params: { ...r.params },
      })),
    }
    if (this.notes !== undefined) doc.notes = this.notes
    return doc
  }

  element(id: string): ComponentDoc | RelationshipDoc | undefined {
    return this.components.find((c) => c.id === id)
      ?? this.relationships.find((r) => r.id === id)
  }

  private freshId(prefix: string): string {
    let candidate: string
    do {
      this.counter += 1
      candidate = `${prefix}${this.counter}`
    } while (this.element(candidate))
    return candidate
  }

  addComponent(kind: ComponentKind, x: number, y: number): ComponentDoc {
    const component: ComponentDoc = {
      id: this.freshId('c'),
      kind,
      name: KIND_LABELS[kind],
      params: blankParams(COMPONENT_PARAMS[kind]),
      x,
      y,
    }
    this.components.push(component)
    return component
  }

  moveComponent(id: string, x: number, y: number): void {
    const component = this.components.find((c) => c.id === id)
    if (component) {
      component.x = x
      component.y = y
    }
  }

  /** Connect two elements with the kind their endpoints admit. */
  connect(sourceId: string, targetId: string):
      { relationship: RelationshipDoc } | { error: string } {
    const source = this.components.find((c) => c.id === sourceId)
    if (!source) return { error: `unknown source '${sourceId}'` }
    const target = this.element(targetId)
    if (!target) return { error: `unknown target '${targetId}'` }
    const admitted = relationshipKindFor(source, target)
    if ('error' in admitted) return admitted
    const relationship: RelationshipDoc = {
      id: this.freshId('r'),
      kind: admitted.kind,
      source: sourceId,
      target: targetId,
      params: blankParams(RELATIONSHIP_PARAMS[admitted.kind]),
    }
    this.relationships.push(relationship)
    return { relationship }
  }

  setParam(elementId: string, name: string, value: ParamValue): void {
    const element = this.element(elementId)
    if (!element) throw new Error(`unknown element '${elementId}'`)
    const applicable = 'kind' in element && 'source' in element
      ? RELATIONSHIP_PARAMS[(element as RelationshipDoc).kind]
      : COMPONENT_PARAMS[(element as ComponentDoc).kind]
    if (!applicable.includes(name)) {
      throw new Error(`'${name}' is not applicable to '${elementId}'`)
    }
    element.params[name] = value
  }

  remove(elementId: string): void {
    this.relationships = this.relationships.filter(
      (r) => r.id !== elementId && r.source !== elementId
        && r.target !== elementId)
    this.components = this.components.filter((c) => c.id !== elementId)
  }
}

function canonical(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(canonical).join(',')}]`
  }
  if (value !== null && typeof value === 'object') {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => `${JSON.stringify(k)}:${canonical(v)}`)
    return `{${entries.join(',')}}`
  }
  return JSON.stringify(value)
}

/** Structural equality modulo layout hints (the round-trip contract). */
export function sameStructure(a: ModelDoc, b: ModelDoc): boolean {
  const strip = (doc: ModelDoc) => ({
    ...doc,
    components: doc.components.map(({ x, y, ...rest }) => rest),
  })
  return canonical(strip(a)) === canonical(strip(b))
}
