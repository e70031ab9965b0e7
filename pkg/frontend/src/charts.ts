/** Chart geometry: pure functions from backend documents to SVG coordinates.
 *
 * Overlaid scenarios share one pair of axes; the capacity line sits at
 * exactly the capacity value on the shared y scale.  No dynamics are
 * computed here: peaks shown in legends come from backend metrics.
 */
import type { RunMetricsDoc, TrajectoryDoc } from './types.js'

export const SERIES_COLORS: Record<string, string> = {
  susceptible: '#4a7bd0',
  infected: '#d04a4a',
  recovered: '#4aa86c',
  active: '#d04a4a',
  cumulative: '#8a6fc9',
}
const OVERLAY_COLORS = ['#d04a4a', '#d0924a', '#8a6fc9', '#4a7bd0', '#4aa86c']

export interface ChartCurve {
  label: string
  color: string
  /** "x1,y1 x2,y2 ..." for an SVG polyline, in pixel space */
  points: string
  peakValue: number
  peakPixelY: number
}

export interface ChartView {
  width: number
  height: number
  margin: number
  xMax: number
  yMax: number
  curves: ChartCurve[]
  capacityValue: number | null
  capacityPixelY: number | null
  xTicks: { pixel: number; label: string }[]
  yTicks: { pixel: number; label: string }[]
}

interface NamedSeries {
  label: string
  color: string
  times: number[]
  values: number[]
}

function buildView(series: NamedSeries[], capacity: number | null,
                   width: number, height: number): ChartView {
  const margin = 44
  const xMax = Math.max(1, ...series.map((s) => s.times[s.times.length - 1] ?? 0))
  let yMax = Math.max(1, ...series.map((s) => Math.max(...s.values)))
  if (capacity !== null) yMax = Math.max(yMax, capacity)
  yMax *= 1.05 // headroom so peaks stay inside the frame

  const plotW = width - 2 * margin
  const plotH = height - 2 * margin
  const toX = (t: number) => margin + (t / xMax) * plotW
  const toY = (v: number) => height - margin - (v / yMax) * plotH

  const curves = series.map((s) => {
    let peakValue = -Infinity
    const points = s.times
      .map((t, i) => {
        const v = s.values[i]
        if (v > peakValue) peakValue = v
        return `${toX(t).toFixed(1)},${toY(v).toFixed(1)}`
      })
      .join(' ')
    return {
      label: s.label, color: s.color, points,
      peakValue, peakPixelY: toY(peakValue),
    }
  })

  const xTicks = []
  for (let i = 0; i <= 4; i += 1) {
    const t = (xMax / 4) * i
    xTicks.push({ pixel: toX(t), label: `${Math.round(t)}d` })
  }
  const yTicks = []
  for (let i = 0; i <= 4; i += 1) {
    const v = (yMax / 4) * i
    yTicks.push({ pixel: toY(v), label: `${Math.round(v)}` })
  }

  return {
    width, height, margin, xMax, yMax, curves,
    capacityValue: capacity,
    capacityPixelY: capacity === null ? null : toY(capacity),
    xTicks, yTicks,
  }
}

/** All series of one run (S/I/R, or active/cumulative). */
export function singleRunView(trajectory: TrajectoryDoc,
                              capacity: number | null,
                              width = 760, height = 380): ChartView {
  const order = ['susceptible', 'infected', 'recovered', 'active', 'cumulative']
  const names = order.filter((n) => n in trajectory.series)
  const series = names.map((name) => ({
    label: name,
    color: SERIES_COLORS[name] ?? '#666',
    times: trajectory.times,
    values: trajectory.series[name],
  }))
  return buildView(series, capacity, width, height)
}

/** One threshold-relevant curve per run, overlaid on shared axes. */
export function overlayView(
  runs: { label: string; trajectory: TrajectoryDoc }[],
  capacity: number | null,
  width = 760, height = 380,
): ChartView {
  const series = runs.map((run, i) => {
    const name = 'infected' in run.trajectory.series ? 'infected' : 'active'
    return {
      label: run.label,
      color: OVERLAY_COLORS[i % OVERLAY_COLORS.length],
      times: run.trajectory.times,
      values: run.trajectory.series[name],
    }
  })
  return buildView(series, capacity, width, height)
}

/** Curve labels from highest to lowest rendered peak (pixel space). */
export function renderedPeakOrder(view: ChartView): string[] {
  return [...view.curves]
    .sort((a, b) => a.peakPixelY - b.peakPixelY) // smaller y pixel = higher
    .map((c) => c.label)
}

/** Scenario labels from highest to lowest backend peak metric. */
export function metricsPeakOrder(
  metricsByLabel: Record<string, RunMetricsDoc>): string[] {
  return Object.keys(metricsByLabel)
    .sort((a, b) =>
      metricsByLabel[b].peak_infected - metricsByLabel[a].peak_infected)
}

export function renderChartSvg(view: ChartView): string {
  const parts: string[] = []
  const { width, height, margin } = view
  parts.push(`<svg viewBox="0 0 ${width} ${height}" class="chart">`)
  parts.push(`<rect x="${margin}" y="${margin}" width="${width - 2 * margin}"`
    + ` height="${height - 2 * margin}" class="chart-frame"/>`)
  for (const tick of view.xTicks) {
    parts.push(`<text x="${tick.pixel}" y="${height - margin + 16}" `
      + `class="tick">${tick.label}</text>`)
  }
  for (const tick of view.yTicks) {
    parts.push(`<text x="${margin - 6}" y="${tick.pixel + 4}" `
      + `class="tick tick-y">${tick.label}</text>`)
  }
  for (const curve of view.curves) {
    parts.push(`<polyline points="${curve.points}" fill="none" `
      + `stroke="${curve.color}" stroke-width="2"/>`)
  }
  if (view.capacityPixelY !== null) {
    const y = view.capacityPixelY.toFixed(1)
    parts.push(`<line x1="${margin}" y1="${y}" x2="${width - margin}" `
      + `y2="${y}" class="capacity-line"/>`)
    parts.push(`<text x="${width - margin}" y="${(view.capacityPixelY - 6).toFixed(1)}" `
      + `text-anchor="end" class="capacity-label">capacity `
      + `${view.capacityValue}</text>`)
  }
  parts.push('</svg>')
  return parts.join('')
}
