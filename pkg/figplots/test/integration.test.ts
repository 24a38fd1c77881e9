// Acceptance: regenerate all five benchmark figure layouts from fresh
// sirnc CLI outputs, with the certificate band on the fifth, byte-stably.

import { execFileSync } from 'node:child_process'
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { join } from 'node:path'
import { beforeAll, describe, expect, it } from 'vitest'
import { decodePng } from '../src/png.js'
import { render } from '../src/render.js'
import { parseSpec } from '../src/spec.js'

const PRESETS = ['fig1', 'fig2', 'fig3', 'fig4', 'fig5'] as const
const dir = mkdtempSync(join(tmpdir(), 'figplots-accept-'))
const out = join(dir, 'out')

function sirnc(...args: string[]): void {
  execFileSync('python3', ['-m', 'sirnc.cli', ...args], { stdio: 'pipe' })
}

beforeAll(() => {
  for (const preset of PRESETS) {
    sirnc('simulate', '--preset', preset, '--mode', 'sde', '--seed', '3', '--out', out)
  }
  // fig5 analyze exits 0 and carries the certificate block
  sirnc('analyze', '--preset', 'fig5', '--out', out)
}, 120_000)

function specFor(preset: string): string {
  const simDir = join(out, preset, 'simulate')
  const body: Record<string, unknown> =
    preset === 'fig5'
      ? {
          kind: 'error-band',
          deterministic_csv: join(simDir, 'det.csv'),
          stochastic_csv: [join(simDir, 'sde.csv')],
          analysis_json: join(out, 'fig5', 'analyze', 'analysis.json'),
          output: join(dir, `${preset}.png`),
          title: `${preset} certificate band`,
          t_min: 10,
        }
      : {
          kind: 'trajectory-overlay',
          deterministic_csv: join(simDir, 'det.csv'),
          stochastic_csv: join(simDir, 'sde.csv'),
          output: join(dir, `${preset}.png`),
          title: `${preset} trajectories`,
        }
  const path = join(dir, `${preset}.spec.json`)
  writeFileSync(path, JSON.stringify(body))
  return path
}

describe('figure regeneration from fresh CLI outputs', () => {
  it('renders all five layouts without error', () => {
    for (const preset of PRESETS) {
      const spec = parseSpec(specFor(preset))
      const png = render(spec)
      writeFileSync(spec.output, png)
      expect(existsSync(spec.output)).toBe(true)
      const img = decodePng(readFileSync(spec.output))
      expect(img.width).toBeGreaterThan(0)
    }
  })

  it('fig5 image contains the sqrt(bound) gray band', () => {
    const spec = parseSpec(specFor('fig5'))
    const img = decodePng(render(spec))
    let gray = 0
    for (let i = 0; i < img.rgb.length; i += 3) {
      if (img.rgb[i] === 219 && img.rgb[i + 1] === 219 && img.rgb[i + 2] === 219) gray++
    }
    expect(gray).toBeGreaterThan(5_000)
    // band half-width must be sqrt(bound) from the analyze JSON
    const analysis = JSON.parse(
      readFileSync(join(out, 'fig5', 'analyze', 'analysis.json'), 'utf8'),
    )
    expect(Math.sqrt(analysis.certificate.bound)).toBeGreaterThan(0)
  })

  it('is byte-stable across reruns with fixed inputs', () => {
    for (const preset of PRESETS) {
      const spec = parseSpec(specFor(preset))
      const first = render(spec)
      const second = render(spec)
      expect(first.equals(second), `${preset} not byte-stable`).toBe(true)
    }
  })
})
