import { describe, expect, it } from 'vitest'
import { crc32, decodePng, encodePng } from '../src/png.js'

describe('png encoder', () => {
  it('round-trips pixels exactly', () => {
    const w = 13
    const h = 7
    const rgb = new Uint8Array(w * h * 3)
    for (let i = 0; i < rgb.length; i++) rgb[i] = (i * 37) % 256
    const png = encodePng(w, h, rgb)
    const back = decodePng(png)
    expect(back.width).toBe(w)
    expect(back.height).toBe(h)
    expect(Buffer.from(back.rgb).equals(Buffer.from(rgb))).toBe(true)
  })

  it('starts with the PNG signature and valid chunk CRCs', () => {
    const png = encodePng(2, 2, new Uint8Array(12))
    expect([...png.subarray(0, 8)]).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a])
    // decodePng validates every CRC
    expect(() => decodePng(png)).not.toThrow()
    // corrupting a byte breaks the CRC
    const corrupted = Buffer.from(png)
    corrupted[20] ^= 0xff
    expect(() => decodePng(corrupted)).toThrow(/CRC|IHDR/)
  })

  it('is byte-stable for identical input', () => {
    const rgb = new Uint8Array(30 * 20 * 3).fill(128)
    const a = encodePng(30, 20, rgb)
    const b = encodePng(30, 20, rgb)
    expect(a.equals(b)).toBe(true)
  })

  it('rejects mismatched buffer sizes', () => {
    expect(() => encodePng(10, 10, new Uint8Array(5))).toThrow(/bytes/)
  })

  it('crc32 matches the known check value', () => {
    // standard test vector: CRC-32 of "123456789"
    expect(crc32(Buffer.from('123456789', 'ascii'))).toBe(0xcbf43926)
  })
})
