// Software rasterizer for the two figure layouts.

import { ENSEMBLE_COLUMNS, TRAJECTORY_COLUMNS, Table, column, readAnalysis, readCsv } from './csv.js'
import { GLYPH_HEIGHT, GLYPH_WIDTH, glyph, textWidth } from './font.js'
import { encodePng } from './png.js'
import { PlotSpec } from './spec.js'

export type Rgb = readonly [number, number, number]

export const WIDTH = 960
export const HEIGHT = 600
const MARGIN = { left: 78, right: 24, top: 46, bottom: 64 }

const WHITE: Rgb = [255, 255, 255]
const BLACK: Rgb = [0, 0, 0]
const GRAY_BAND: Rgb = [219, 219, 219]
const GRID: Rgb = [236, 236, 236]

// one color per compartment series; deterministic runs reuse the color dotted
const SERIES: Array<{ name: string; column: string; color: Rgb }> = [
  { name: 'S', column: 'S', color: [31, 119, 180] },
  { name: 'I', column: 'I', color: [214, 39, 40] },
  { name: 'S*', column: 'S_star', color: [44, 160, 44] },
  { name: 'I*', column: 'I_star', color: [148, 103, 189] },
]
const ENSEMBLE_COLOR: Rgb = [120, 120, 120]

export class Canvas {
  readonly pixels: Uint8Array

  constructor(
    readonly width: number = WIDTH,
    readonly height: number = HEIGHT,
  ) {
    this.pixels = new Uint8Array(width * height * 3)
    this.pixels.fill(255)
  }

  set(x: number, y: number, color: Rgb): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return
    const i = (y * this.width + x) * 3
    this.pixels[i] = color[0]
    this.pixels[i + 1] = color[1]
    this.pixels[i + 2] = color[2]
  }

  get(x: number, y: number): Rgb {
    const i = (y * this.width + x) * 3
    return [this.pixels[i], this.pixels[i + 1], this.pixels[i + 2]]
  }

  fillRect(x0: number, y0: number, x1: number, y1: number, color: Rgb): void {
    const xa = Math.max(0, Math.min(x0, x1))
    const xb = Math.min(this.width - 1, Math.max(x0, x1))
    const ya = Math.max(0, Math.min(y0, y1))
    const yb = Math.min(this.height - 1, Math.max(y0, y1))
    for (let y = ya; y <= yb; y++) {
      for (let x = xa; x <= xb; x++) {
        this.set(x, y, color)
      }
    }
  }

  /**
   * Bresenham line with optional dash pattern. The dash phase accumulates
   * along the pixel count so consecutive segments of a polyline continue
   * the pattern; pass the returned phase back in.
   */
  line(
    x0: number,
    y0: number,
    x1: number,
    y1: number,
    color: Rgb,
    thickness = 1,
    dash?: { on: number; off: number; phase: number },
  ): number {
    let phase = dash?.phase ?? 0
    let x = x0
    let y = y0
    const dx = Math.abs(x1 - x0)
    const dy = -Math.abs(y1 - y0)
    const sx = x0 < x1 ? 1 : -1
    const sy = y0 < y1 ? 1 : -1
    let err = dx + dy
    for (;;) {
      const draw = !dash || phase % (dash.on + dash.off) < dash.on
      if (draw) {
        this.set(x, y, color)
        if (thickness > 1) {
          this.set(x + 1, y, color)
          this.set(x, y + 1, color)
          this.set(x + 1, y + 1, color)
        }
      }
      phase++
      if (x === x1 && y === y1) break
      const e2 = 2 * err
      if (e2 >= dy) {
        err += dy
        x += sx
      }
      if (e2 <= dx) {
        err += dx
        y += sy
      }
    }
    return phase
  }

  text(x: number, y: number, s: string, color: Rgb, scale = 2): void {
    let cx = x
    for (const ch of s) {
      const rows = glyph(ch)
      for (let gy = 0; gy < GLYPH_HEIGHT; gy++) {
        for (let gx = 0; gx < GLYPH_WIDTH; gx++) {
          if ((rows[gy] >> (GLYPH_WIDTH - 1 - gx)) & 1) {
            this.fillRect(
              cx + gx * scale,
              y + gy * scale,
              cx + gx * scale + scale - 1,
              y + gy * scale + scale - 1,
              color,
            )
          }
        }
      }
      cx += (GLYPH_WIDTH + 1) * scale
    }
  }

  png(): Buffer {
    return encodePng(this.width, this.height, this.pixels)
  }
}

interface Axes {
  toX(t: number): number
  toY(v: number): number
  tLo: number
  tHi: number
  vLo: number
  vHi: number
}

function niceStep(range: number): number {
  const raw = range / 5
  const mag = Math.pow(10, Math.floor(Math.log10(raw)))
  for (const mult of [1, 2, 2.5, 5, 10]) {
    if (raw <= mult * mag) return mult * mag
  }
  return 10 * mag
}

function formatTick(v: number): string {
  const rounded = Math.round(v * 1e6) / 1e6
  return Math.abs(rounded - Math.round(rounded)) < 1e-9
    ? String(Math.round(rounded))
    : String(rounded)
}

function drawAxes(canvas: Canvas, axes: Axes, title: string): void {
  const { left, right, top, bottom } = MARGIN
  const x0 = left
  const x1 = canvas.width - right
  const y0 = top
  const y1 = canvas.height - bottom

  const vStep = niceStep(axes.vHi - axes.vLo)
  for (let v = Math.ceil(axes.vLo / vStep) * vStep; v <= axes.vHi + 1e-12; v += vStep) {
    const y = axes.toY(v)
    canvas.line(x0, y, x1, y, GRID)
    const label = formatTick(v)
    canvas.text(x0 - 10 - textWidth(label, 2), y - 7, label, BLACK)
    canvas.line(x0 - 4, y, x0, y, BLACK)
  }
  const tStep = niceStep(axes.tHi - axes.tLo)
  for (let t = Math.ceil(axes.tLo / tStep) * tStep; t <= axes.tHi + 1e-12; t += tStep) {
    const x = axes.toX(t)
    canvas.line(x, y0, x, y1, GRID)
    const label = formatTick(t)
    canvas.text(x - textWidth(label, 2) / 2, y1 + 10, label, BLACK)
    canvas.line(x, y1, x, y1 + 4, BLACK)
  }

  canvas.line(x0, y0, x0, y1, BLACK)
  canvas.line(x0, y1, x1, y1, BLACK)
  canvas.text(Math.floor((x0 + x1) / 2) - 6, y1 + 34, 'T', BLACK)
  if (title) {
    canvas.text(Math.floor((x0 + x1 - textWidth(title, 2)) / 2), 14, title, BLACK)
  }
}

function makeAxes(tLo: number, tHi: number, vLo: number, vHi: number): Axes {
  const x0 = MARGIN.left
  const x1 = WIDTH - MARGIN.right
  const y0 = MARGIN.top
  const y1 = HEIGHT - MARGIN.bottom
  return {
    tLo,
    tHi,
    vLo,
    vHi,
    toX: (t) => Math.round(x0 + ((t - tLo) / (tHi - tLo)) * (x1 - x0)),
    toY: (v) => Math.round(y1 - ((v - vLo) / (vHi - vLo)) * (y1 - y0)),
  }
}

function drawSeries(
  canvas: Canvas,
  axes: Axes,
  t: number[],
  values: number[],
  color: Rgb,
  opts: { dotted?: boolean; thickness?: number } = {},
): void {
  const dash = opts.dotted ? { on: 3, off: 5, phase: 0 } : undefined
  for (let i = 1; i < t.length; i++) {
    if (t[i] < axes.tLo || t[i - 1] > axes.tHi) continue
    const phase = canvas.line(
      axes.toX(t[i - 1]),
      axes.toY(values[i - 1]),
      axes.toX(t[i]),
      axes.toY(values[i]),
      color,
      opts.thickness ?? 1,
      dash,
    )
    if (dash) dash.phase = phase
  }
}

function drawLegend(canvas: Canvas, entries: Array<{ label: string; color: Rgb }>, note: string): void {
  let x = MARGIN.left + 14
  const y = MARGIN.top + 8
  for (const entry of entries) {
    canvas.fillRect(x, y + 5, x + 22, y + 7, entry.color)
    canvas.text(x + 28, y, entry.label, BLACK)
    x += 28 + textWidth(entry.label, 2) + 22
  }
  canvas.text(MARGIN.left + 14, y + 20, note, BLACK, 1)
}

interface LoadedInputs {
  det: Table
  sde: Table[]
  ensemble?: Table
}

function loadInputs(spec: PlotSpec): LoadedInputs {
  const det = readCsv(spec.deterministicCsv, TRAJECTORY_COLUMNS)
  const sde = spec.stochasticCsvs.map((p) => readCsv(p, TRAJECTORY_COLUMNS))
  const ensemble = spec.ensembleCsv ? readCsv(spec.ensembleCsv, ENSEMBLE_COLUMNS) : undefined
  return { det, sde, ensemble }
}

function valueRange(tables: Table[], columns: string[], tLo: number): { lo: number; hi: number } {
  let hi = -Infinity
  for (const table of tables) {
    const t = column(table, 't')
    for (const name of columns) {
      const values = column(table, name)
      for (let i = 0; i < values.length; i++) {
        if (t[i] >= tLo && values[i] > hi) hi = values[i]
      }
    }
  }
  if (!Number.isFinite(hi)) hi = 1
  return { lo: 0, hi: hi * 1.08 + 1e-9 }
}

/** Render the figure described by ``spec`` and return the PNG bytes. */
export function render(spec: PlotSpec): Buffer {
  const inputs = loadInputs(spec)
  const canvas = new Canvas()
  const seriesColumns = SERIES.map((s) => s.column)
  const tLo = spec.kind === 'error-band' ? spec.tMin : 0
  const allTables = [inputs.det, ...inputs.sde]
  const tValues = column(inputs.det, 't')
  const tHi = tValues[tValues.length - 1]

  let band: { center: number; half: number }[] = []
  if (spec.kind === 'error-band') {
    const info = readAnalysis(spec.analysisJson!)
    const half = Math.sqrt(info.certificate.bound)
    band = [
      { center: info.s, half },
      { center: info.sStar, half },
    ]
  }

  const range = valueRange(allTables, seriesColumns, tLo)
  for (const b of band) {
    range.hi = Math.max(range.hi, (b.center + b.half) * 1.08)
  }
  if (inputs.ensemble) {
    const values = column(inputs.ensemble, 'ms_distance')
    range.hi = Math.max(range.hi, Math.max(...values) * 1.08)
  }
  const axes = makeAxes(tLo, tHi, range.lo, range.hi)

  // bands go underneath everything
  for (const b of band) {
    canvas.fillRect(
      axes.toX(axes.tLo),
      axes.toY(b.center + b.half),
      axes.toX(axes.tHi),
      axes.toY(Math.max(b.center - b.half, axes.vLo)),
      GRAY_BAND,
    )
  }

  drawAxes(canvas, axes, spec.title)

  for (const series of SERIES) {
    drawSeries(canvas, axes, tValues, column(inputs.det, series.column), series.color, {
      dotted: true,
    })
    for (const table of inputs.sde) {
      drawSeries(canvas, axes, column(table, 't'), column(table, series.column), series.color, {
        thickness: 2,
      })
    }
  }
  if (inputs.ensemble) {
    drawSeries(
      canvas,
      axes,
      column(inputs.ensemble, 't'),
      column(inputs.ensemble, 'ms_distance'),
      ENSEMBLE_COLOR,
      { thickness: 2 },
    )
  }

  const legend = SERIES.map((s) => ({ label: s.name, color: s.color }))
  if (inputs.ensemble) legend.push({ label: 'E|X-X*|2', color: ENSEMBLE_COLOR })
  const note =
    spec.kind === 'error-band'
      ? 'DETERMINISTIC DOTTED, REALIZATIONS SOLID. GRAY BAND = SQRT(BOUND), ILLUSTRATIVE ENVELOPE.'
      : 'DETERMINISTIC DOTTED, STOCHASTIC SOLID.'
  drawLegend(canvas, legend, note)

  return canvas.png()
}
