//! Lossless compressors used as computable complexity proxies.
//!
//! The default `cm` compressor is a bit-level context-mixing model driving a
//! binary arithmetic coder: counts under several fixed-length bit histories
//! and a long-range match predictor are combined by an online logistic
//! mixer. It is not byte-aligned, which matters for strings packed at 2 or 3
//! bits per symbol. `deflate` (zlib, level 9) is kept for comparison.

use std::io::{Read, Write};

use flate2::read::ZlibDecoder;
use flate2::write::ZlibEncoder;

use crate::error::{Error, Result};

pub const DEFAULT_COMPRESSOR: &str = "cm";

pub trait Compressor: Send + Sync {
    fn id(&self) -> &'static str;
    fn compress(&self, data: &[u8]) -> Vec<u8>;
    fn decompress(&self, data: &[u8]) -> Result<Vec<u8>>;

    fn compressed_bits(&self, data: &[u8]) -> usize {
        8 * self.compress(data).len()
    }
}

pub fn compressor_by_id(id: &str) -> Result<Box<dyn Compressor>> {
    match id {
        "cm" => Ok(Box::new(ContextMixing)),
        "deflate" => Ok(Box::new(Deflate)),
        _ => Err(Error::UnknownCompressor(id.to_string())),
    }
}

pub fn compressor_ids() -> &'static [&'static str] {
    &["cm", "deflate"]
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Deflate;

impl Compressor for Deflate {
    fn id(&self) -> &'static str {
        "deflate"
    }

    fn compress(&self, data: &[u8]) -> Vec<u8> {
        let mut enc = ZlibEncoder::new(Vec::new(), flate2::Compression::best());
        enc.write_all(data).expect("writing to a Vec");
        enc.finish().expect("writing to a Vec")
    }

    fn decompress(&self, data: &[u8]) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        ZlibDecoder::new(data)
            .read_to_end(&mut out)
            .map_err(|e| Error::Corrupt(e.to_string()))?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ContextMixing;

impl Compressor for ContextMixing {
    fn id(&self) -> &'static str {
        "cm"
    }

    fn compress(&self, data: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        write_varint(&mut out, data.len() as u64);
        let mut model = Model::new();
        let mut enc = Encoder::new(out);
        for &byte in data {
            for i in (0..8).rev() {
                let bit = (byte >> i) & 1;
                enc.code(bit, model.p1());
                model.update(bit);
            }
        }
        enc.finish()
    }

    fn decompress(&self, data: &[u8]) -> Result<Vec<u8>> {
        let (len, used) = read_varint(data)?;
        let len = usize::try_from(len).map_err(|_| Error::Corrupt("length overflows".into()))?;
        // every output byte costs at least a few bits; refuse absurd headers
        if len > data.len().saturating_mul(4096).max(1 << 16) {
            return Err(Error::Corrupt(format!("implausible length {len}")));
        }
        let mut model = Model::new();
        let mut dec = Decoder::new(&data[used..]);
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let mut byte = 0u8;
            for _ in 0..8 {
                let bit = dec.decode(model.p1());
                model.update(bit);
                byte = (byte << 1) | bit;
            }
            out.push(byte);
        }
        Ok(out)
    }
}

fn write_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let b = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(b);
            return;
        }
        out.push(b | 0x80);
    }
}

fn read_varint(data: &[u8]) -> Result<(u64, usize)> {
    let mut v = 0u64;
    for (i, &b) in data.iter().enumerate().take(10) {
        v |= u64::from(b & 0x7f) << (7 * i);
        if b & 0x80 == 0 {
            return Ok((v, i + 1));
        }
    }
    Err(Error::Corrupt("bad length header".into()))
}

/// Bit-history lengths with their own count tables.
const ORDERS: [u32; 13] = [0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64];
const TABLE_BITS: u32 = 22;
const COUNT_LIMIT: u32 = 1023;
const MATCH_MIN: u32 = 32;
const MATCH_BITS: u32 = 20;
const BIAS_INPUT: f64 = 0.3;
const INITIAL_WEIGHT: f64 = 0.3;
const INPUTS: usize = ORDERS.len() + 2;

struct Model {
    /// `(n0, n1)` per hashed context.
    counts: Vec<[u16; 2]>,
    slots: [usize; ORDERS.len()],
    history: u64,
    bits: Vec<u8>,
    match_table: Vec<u32>,
    match_ptr: Option<usize>,
    match_len: u32,
    weights: [f64; INPUTS],
    inputs: [f64; INPUTS],
    p: f64,
    coded: u64,
}

fn stretch(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn squash(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn hash(order: u32, ctx: u64) -> u64 {
    (ctx ^ (u64::from(order) << 56))
        .wrapping_add(u64::from(order))
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

impl Model {
    fn new() -> Model {
        let mut m = Model {
            counts: vec![[0, 0]; 1 << TABLE_BITS],
            slots: [0; ORDERS.len()],
            history: 0,
            bits: Vec::new(),
            match_table: vec![u32::MAX; 1 << MATCH_BITS],
            match_ptr: None,
            match_len: 0,
            weights: [INITIAL_WEIGHT; INPUTS],
            inputs: [0.0; INPUTS],
            p: 0.5,
            coded: 0,
        };
        m.predict();
        m
    }

    fn predict(&mut self) {
        for (i, &order) in ORDERS.iter().enumerate() {
            let ctx = if order == 0 {
                0
            } else {
                self.history & (u64::MAX >> (64 - order))
            };
            let slot = (hash(order, ctx) >> (64 - TABLE_BITS)) as usize;
            self.slots[i] = slot;
            let [n0, n1] = self.counts[slot];
            let n = f64::from(n0) + f64::from(n1);
            self.inputs[i] = stretch((f64::from(n1) + 0.4) / (n + 0.8));
        }
        self.inputs[ORDERS.len()] = match self.match_ptr {
            Some(ptr) if self.match_len > 0 => {
                let strength = f64::from(self.match_len.min(400) / 16 + 1);
                if self.bits[ptr] == 1 {
                    strength
                } else {
                    -strength
                }
            }
            _ => 0.0,
        };
        self.inputs[ORDERS.len() + 1] = BIAS_INPUT;
        let dot: f64 = self.weights.iter().zip(&self.inputs).map(|(w, x)| w * x).sum();
        self.p = squash(dot);
    }

    /// Probability of a 1 in 16-bit fixed point, never 0 or 1.
    fn p1(&self) -> u32 {
        ((self.p * 65536.0) as u32).clamp(1, 65535)
    }

    fn update(&mut self, bit: u8) {
        let err = f64::from(bit) - self.p;
        let lr = (0.02 / (1.0 + self.coded as f64 / 50_000.0)).max(0.002);
        for (w, x) in self.weights.iter_mut().zip(&self.inputs) {
            *w += lr * err * x;
        }
        for &slot in &self.slots {
            let c = &mut self.counts[slot];
            c[bit as usize] += 1;
            if u32::from(c[0]) + u32::from(c[1]) > COUNT_LIMIT {
                c[0] = c[0].div_ceil(2);
                c[1] = c[1].div_ceil(2);
            }
        }

        match self.match_ptr {
            Some(ptr) if self.bits[ptr] == bit => {
                self.match_len += 1;
                self.match_ptr = Some(ptr + 1);
            }
            _ => {
                self.match_len = 0;
                self.match_ptr = None;
            }
        }
        self.bits.push(bit);
        self.history = (self.history << 1) | u64::from(bit);
        self.coded += 1;
        if self.coded >= u64::from(MATCH_MIN) {
            let key = (hash(MATCH_MIN, self.history & 0xffff_ffff) >> (64 - MATCH_BITS)) as usize;
            if self.match_len == 0 {
                let prev = self.match_table[key];
                if prev != u32::MAX {
                    self.match_ptr = Some(prev as usize);
                    self.match_len = 1;
                }
            }
            self.match_table[key] = self.bits.len() as u32;
        }
        self.predict();
    }
}

struct Encoder {
    out: Vec<u8>,
    x1: u32,
    x2: u32,
}

impl Encoder {
    fn new(out: Vec<u8>) -> Encoder {
        Encoder {
            out,
            x1: 0,
            x2: u32::MAX,
        }
    }

    fn code(&mut self, bit: u8, p1: u32) {
        let mid = self.x1 + ((u64::from(self.x2 - self.x1) * u64::from(p1)) >> 16) as u32;
        if bit == 1 {
            self.x2 = mid;
        } else {
            self.x1 = mid + 1;
        }
        while (self.x1 ^ self.x2) & 0xff00_0000 == 0 {
            self.out.push((self.x2 >> 24) as u8);
            self.x1 <<= 8;
            self.x2 = (self.x2 << 8) | 0xff;
        }
    }

    /// Emits the fewest bytes that, zero-extended, land inside `[x1, x2]`.
    fn finish(mut self) -> Vec<u8> {
        for k in 1..=4u32 {
            let shift = 32 - 8 * k;
            let unit = 1u64 << shift;
            let v = (u64::from(self.x1) + unit - 1) >> shift << shift;
            if v <= u64::from(self.x2) {
                for i in 0..k {
                    self.out.push((v >> (24 - 8 * i)) as u8);
                }
                return self.out;
            }
        }
        unreachable!("x1 itself always fits")
    }
}

struct Decoder<'a> {
    data: &'a [u8],
    pos: usize,
    x1: u32,
    x2: u32,
    x: u32,
}

impl<'a> Decoder<'a> {
    fn new(data: &'a [u8]) -> Decoder<'a> {
        let mut d = Decoder {
            data,
            pos: 0,
            x1: 0,
            x2: u32::MAX,
            x: 0,
        };
        for _ in 0..4 {
            d.x = (d.x << 8) | u32::from(d.next_byte());
        }
        d
    }

    fn next_byte(&mut self) -> u8 {
        let b = self.data.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        b
    }

    fn decode(&mut self, p1: u32) -> u8 {
        let mid = self.x1 + ((u64::from(self.x2 - self.x1) * u64::from(p1)) >> 16) as u32;
        let bit = if self.x <= mid {
            self.x2 = mid;
            1
        } else {
            self.x1 = mid + 1;
            0
        };
        while (self.x1 ^ self.x2) & 0xff00_0000 == 0 {
            self.x1 <<= 8;
            self.x2 = (self.x2 << 8) | 0xff;
            self.x = (self.x << 8) | u32::from(self.next_byte());
        }
        bit
    }
}
