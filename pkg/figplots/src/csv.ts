// Readers for the sirnc CLI's CSV and JSON outputs.

import { readFileSync } from 'node:fs'

export const TRAJECTORY_COLUMNS = ['t', 'S', 'I', 'R', 'S_star', 'I_star', 'R_star'] as const
export const ENSEMBLE_COLUMNS = ['t', 'ms_distance', 'ms_I', 'ms_Istar', 'std_error'] as const

export interface Table {
  /** column name -> values, all columns the same length */
  columns: Map<string, number[]>
  rows: number
}

export function readCsv(path: string, required: readonly string[]): Table {
  const text = readFileSync(path, 'utf8')
  const lines = text.split('\n').filter((line) => line.trim().length > 0)
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`)
  }
  const header = lines[0].split(',').map((h) => h.trim())
  for (const name of required) {
    if (!header.includes(name)) {
      throw new Error(`${path}: missing column '${name}' (have: ${header.join(', ')})`)
    }
  }
  if (lines.length === 1) {
    throw new Error(`${path}: no data rows`)
  }
  const columns = new Map<string, number[]>(header.map((h) => [h, []]))
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(',')
    if (fields.length !== header.length) {
      throw new Error(`${path}: row ${i} has ${fields.length} fields; want ${header.length}`)
    }
    for (let j = 0; j < header.length; j++) {
      const value = Number(fields[j])
      if (!Number.isFinite(value)) {
        throw new Error(`${path}: row ${i}, column '${header[j]}': not a number (${fields[j]})`)
      }
      columns.get(header[j])!.push(value)
    }
  }
  return { columns, rows: lines.length - 1 }
}

export function column(table: Table, name: string): number[] {
  const values = table.columns.get(name)
  if (!values) {
    throw new Error(`missing column '${name}'`)
  }
  return values
}

export interface Certificate {
  bound: number
  normQ: number
  C: number
}

export interface AnalysisInfo {
  certificate: Certificate
  /** susceptible levels of the mixed disease-free point */
  s: number
  sStar: number
}

/** Pull the certificate and the mixed DFE levels out of an analyze JSON. */
export function readAnalysis(path: string): AnalysisInfo {
  const data = JSON.parse(readFileSync(path, 'utf8'))
  const cert = data.certificate
  if (!cert || typeof cert.bound !== 'number') {
    throw new Error(
      `${path}: no certificate block (certificate_error: ${data.certificate_error ?? 'unknown'})`,
    )
  }
  const dfes: Array<{ s: number; s_star: number; kind: string; admissible: boolean }> =
    data.dfes ?? []
  const mixed = dfes.find((d) => (d.kind === 'mixed' || d.kind === 'xi3') && d.admissible)
  if (!mixed) {
    throw new Error(`${path}: no admissible mixed disease-free point in 'dfes'`)
  }
  return { certificate: cert, s: mixed.s, sStar: mixed.s_star }
}
