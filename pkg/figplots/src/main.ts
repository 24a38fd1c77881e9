#!/usr/bin/env node
// figplots <spec.json> - render one figure from sirnc CLI outputs.

import { realpathSync, writeFileSync } from 'node:fs'
import { fileURLToPath } from 'node:url'
import { parseSpec } from './spec.js'
import { render } from './render.js'

export function run(argv: string[]): number {
  if (argv.length !== 1 || argv[0] === '--help' || argv[0] === '-h') {
    console.error('usage: figplots <spec.json>')
    console.error('  spec fields: kind (trajectory-overlay|error-band),')
    console.error('  deterministic_csv, stochastic_csv (path or list), output,')
    console.error('  analysis_json (band mode), ensemble_csv?, title?, t_min?')
    return 2
  }
  try {
    const spec = parseSpec(argv[0])
    const png = render(spec)
    writeFileSync(spec.output, png)
    console.log(`wrote ${spec.output} (${png.length} bytes)`)
    return 0
  } catch (err) {
    console.error(`figplots: ${err instanceof Error ? err.message : String(err)}`)
    return 1
  }
}

let invokedDirectly = false
try {
  invokedDirectly =
    process.argv[1] !== undefined &&
    realpathSync(process.argv[1]) === fileURLToPath(import.meta.url)
} catch {
  invokedDirectly = false
}

if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)))
}
