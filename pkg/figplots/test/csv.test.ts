import { mkdtempSync, writeFileSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { join } from 'node:path'
import { describe, expect, it } from 'vitest'
import { TRAJECTORY_COLUMNS, column, readAnalysis, readCsv } from '../src/csv.js'

const dir = mkdtempSync(join(tmpdir(), 'figplots-csv-'))

function write(name: string, content: string): string {
  const path = join(dir, name)
  writeFileSync(path, content)
  return path
}

describe('readCsv', () => {
  it('parses a trajectory file', () => {
    const path = write(
      'ok.csv',
      't,S,I,R,S_star,I_star,R_star\n0.0,0.25,0.25,0.0,0.25,0.25,0.0\n0.05,0.26,0.24,0.01,0.25,0.24,0.0\n',
    )
    const table = readCsv(path, TRAJECTORY_COLUMNS)
    expect(table.rows).toBe(2)
    expect(column(table, 'S')).toEqual([0.25, 0.26])
    expect(column(table, 't')).toEqual([0, 0.05])
  })

  it('names the missing column in the error', () => {
    const path = write('missing.csv', 't,S,I\n0,1,2\n')
    expect(() => readCsv(path, TRAJECTORY_COLUMNS)).toThrow(/missing column 'R'/)
  })

  it('rejects an empty trajectory', () => {
    const path = write('empty.csv', 't,S,I,R,S_star,I_star,R_star\n')
    expect(() => readCsv(path, TRAJECTORY_COLUMNS)).toThrow(/no data rows/)
  })

  it('rejects non-numeric fields', () => {
    const path = write('nan.csv', 't,S,I,R,S_star,I_star,R_star\n0,a,0,0,0,0,0\n')
    expect(() => readCsv(path, TRAJECTORY_COLUMNS)).toThrow(/not a number/)
  })

  it('rejects ragged rows', () => {
    const path = write('ragged.csv', 't,S,I,R,S_star,I_star,R_star\n0,1,2\n')
    expect(() => readCsv(path, TRAJECTORY_COLUMNS)).toThrow(/fields/)
  })
})

describe('readAnalysis', () => {
  it('extracts the certificate and mixed levels', () => {
    const path = write(
      'analysis.json',
      JSON.stringify({
        dfes: [
          { s: 0.3, s_star: 0, kind: 'fully_compliant', admissible: true },
          { s: 0.25, s_star: 0.05, kind: 'mixed', admissible: true },
        ],
        certificate: { bound: 0.0645, normQ: 0.4575, C: 2.064 },
      }),
    )
    const info = readAnalysis(path)
    expect(info.s).toBe(0.25)
    expect(info.sStar).toBe(0.05)
    expect(info.certificate.bound).toBeCloseTo(0.0645)
  })

  it('reports a missing certificate with the upstream reason', () => {
    const path = write(
      'nocert.json',
      JSON.stringify({ dfes: [], certificate: null, certificate_error: 'nu must be > 0' }),
    )
    expect(() => readAnalysis(path)).toThrow(/nu must be > 0/)
  })
})
