// PlotSpec: the JSON job description consumed by the figplots CLI.

import { readFileSync } from 'node:fs'
import { dirname, resolve } from 'node:path'

export type FigureKind = 'trajectory-overlay' | 'error-band'

export interface PlotSpec {
  kind: FigureKind
  /** deterministic trajectory CSV (drawn dotted) */
  deterministicCsv: string
  /** one or more stochastic realizations (drawn solid) */
  stochasticCsvs: string[]
  /** analyze-command JSON; required for error-band figures */
  analysisJson?: string
  /** optional ensemble CSV; adds the mean-square distance series */
  ensembleCsv?: string
  output: string
  title: string
  /** error-band figures only show t >= tMin (default 10) */
  tMin: number
}

function asStringArray(value: unknown, label: string): string[] {
  if (typeof value === 'string') return [value]
  if (Array.isArray(value) && value.every((v) => typeof v === 'string')) {
    return value as string[]
  }
  throw new Error(`'${label}' must be a path or an array of paths`)
}

export function parseSpec(path: string): PlotSpec {
  const raw = JSON.parse(readFileSync(path, 'utf8'))
  const base = dirname(resolve(path))
  const rel = (p: string) => resolve(base, p)

  const kind = raw.kind
  if (kind !== 'trajectory-overlay' && kind !== 'error-band') {
    throw new Error(`'kind' must be 'trajectory-overlay' or 'error-band', got ${JSON.stringify(kind)}`)
  }
  if (typeof raw.deterministic_csv !== 'string') {
    throw new Error(`'deterministic_csv' is required`)
  }
  if (typeof raw.output !== 'string') {
    throw new Error(`'output' is required`)
  }
  const stochastic =
    raw.stochastic_csv === undefined && raw.stochastic_csvs === undefined
      ? []
      : asStringArray(raw.stochastic_csv ?? raw.stochastic_csvs, 'stochastic_csv')
  if (kind === 'error-band' && typeof raw.analysis_json !== 'string') {
    throw new Error(`error-band figures require 'analysis_json' (certificate source)`)
  }
  return {
    kind,
    deterministicCsv: rel(raw.deterministic_csv),
    stochasticCsvs: stochastic.map(rel),
    analysisJson: raw.analysis_json === undefined ? undefined : rel(raw.analysis_json),
    ensembleCsv: raw.ensemble_csv === undefined ? undefined : rel(raw.ensemble_csv),
    output: rel(raw.output),
    title: typeof raw.title === 'string' ? raw.title : '',
    tMin: typeof raw.t_min === 'number' ? raw.t_min : 10,
  }
}
