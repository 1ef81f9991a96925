//! graph6 and sparse6 text formats.
//!
//! Both formats pack bits into printable bytes `63..=126`, six bits per byte,
//! most significant bit first. Encoding follows the reference encoder
//! byte-for-byte; sparse6 decoding also accepts the alternative padding some
//! older writers produce.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::graph::Graph;

/// Largest order representable by the size prefix.
pub const MAX_ORDER: u64 = (1 << 36) - 1;

const GRAPH6_HEADER: &str = ">>graph6<<";
const SPARSE6_HEADER: &str = ">>sparse6<<";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Graph6,
    Sparse6,
}

impl Format {
    /// Guesses the format of a line from its first byte.
    pub fn detect(line: &str) -> Format {
        let body = strip_header(line);
        if body.starts_with(':') {
            Format::Sparse6
        } else {
            Format::Graph6
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "graph6" | "g6" => Ok(Format::Graph6),
            "sparse6" | "s6" => Ok(Format::Sparse6),
            other => Err(format!("unknown format {other:?} (expected graph6 or sparse6)")),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Graph6 => "graph6",
            Format::Sparse6 => "sparse6",
        })
    }
}

/// Decoding and encoding failures. Offsets are byte positions in the line.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("malformed size header at byte {offset}")]
    MalformedHeader { offset: usize },
    #[error("byte {byte:#04x} at offset {offset} is outside 63..=126")]
    ByteOutOfRange { byte: u8, offset: usize },
    #[error("bitstream truncated at byte {offset}")]
    Truncated { offset: usize },
    #[error("unexpected trailing data at byte {offset}")]
    TrailingData { offset: usize },
    #[error("edge {{{u},{v}}} near byte {offset} is a loop or repeated edge")]
    NotSimple { u: usize, v: usize, offset: usize },
    #[error("order {0} exceeds the format limit")]
    OrderTooLarge(usize),
}

fn strip_header(line: &str) -> &str {
    split_header(line).1
}

/// Drops a leading format header and the line ending; returns the body and
/// its byte offset in `line`.
fn split_header(line: &str) -> (usize, &str) {
    let line = line.trim_end_matches(['\n', '\r']);
    for h in [GRAPH6_HEADER, SPARSE6_HEADER] {
        if let Some(rest) = line.strip_prefix(h) {
            return (h.len(), rest);
        }
    }
    (0, line)
}

fn check_bytes(bytes: &[u8], base: usize) -> Result<(), CodecError> {
    match bytes.iter().position(|b| !(63..=126).contains(b)) {
        Some(i) => Err(CodecError::ByteOutOfRange {
            byte: bytes[i],
            offset: base + i,
        }),
        None => Ok(()),
    }
}

/// Reads the size prefix, returning `(n, bytes consumed)`.
fn read_size(bytes: &[u8], base: usize) -> Result<(usize, usize), CodecError> {
    let take = |from: usize, count: usize| -> Result<usize, CodecError> {
        if bytes.len() < from + count {
            return Err(CodecError::MalformedHeader { offset: base + bytes.len() });
        }
        Ok(bytes[from..from + count]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize))
    };
    match bytes.first() {
        None => Err(CodecError::MalformedHeader { offset: base }),
        Some(&126) if bytes.get(1) == Some(&126) => Ok((take(2, 6)?, 8)),
        Some(&126) => Ok((take(1, 3)?, 4)),
        Some(&b) => Ok(((b - 63) as usize, 1)),
    }
}

fn write_size(out: &mut Vec<u8>, n: usize) -> Result<(), CodecError> {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else if n as u64 <= MAX_ORDER {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        return Err(CodecError::OrderTooLarge(n));
    }
    Ok(())
}

/// Packs a bit sequence six bits per byte, padding the final byte.
struct BitWriter<'a> {
    out: &'a mut Vec<u8>,
    acc: u8,
    filled: u32,
}

impl<'a> BitWriter<'a> {
    fn new(out: &'a mut Vec<u8>) -> Self {
        BitWriter { out, acc: 0, filled: 0 }
    }

    fn push(&mut self, bit: bool) {
        self.acc = (self.acc << 1) | bit as u8;
        self.filled += 1;
        if self.filled == 6 {
            self.out.push(self.acc + 63);
            self.acc = 0;
            self.filled = 0;
        }
    }

    fn push_bits(&mut self, value: usize, width: u32) {
        for i in (0..width).rev() {
            self.push((value >> i) & 1 == 1);
        }
    }

    /// Bits still needed to complete the current byte (0 if aligned).
    fn room(&self) -> u32 {
        if self.filled == 0 {
            0
        } else {
            6 - self.filled
        }
    }

    fn finish_with_zeros(mut self) {
        while self.filled != 0 {
            self.push(false);
        }
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn remaining(&self) -> usize {
        self.bytes.len() * 6 - self.pos
    }

    fn bit(&mut self) -> bool {
        let b = self.bytes[self.pos / 6] - 63;
        let bit = (b >> (5 - self.pos % 6)) & 1 == 1;
        self.pos += 1;
        bit
    }

    fn bits(&mut self, width: u32) -> usize {
        (0..width).fold(0, |acc, _| (acc << 1) | self.bit() as usize)
    }
}

pub fn encode_graph6(g: &Graph) -> Result<String, CodecError> {
    let bytes = graph6_bytes(g)?;
    Ok(String::from_utf8(bytes).expect("graph6 output is ASCII"))
}

pub(crate) fn graph6_bytes(g: &Graph) -> Result<Vec<u8>, CodecError> {
    let n = g.order();
    let mut row = vec![false; n];
    let mut current = usize::MAX;
    graph6_with(n, |i, j| {
        if j != current {
            current = j;
            row.iter_mut().for_each(|x| *x = false);
            for u in g.neighbors(j) {
                row[u] = true;
            }
        }
        row[i]
    })
}

/// graph6 bytes for an adjacency predicate queried as `adj(i, j)` with
/// `i < j`, in bit order.
pub(crate) fn graph6_with(
    n: usize,
    mut adj: impl FnMut(usize, usize) -> bool,
) -> Result<Vec<u8>, CodecError> {
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    write_size(&mut out, n)?;
    let mut w = BitWriter::new(&mut out);
    for j in 1..n {
        for i in 0..j {
            w.push(adj(i, j));
        }
    }
    w.finish_with_zeros();
    Ok(out)
}

pub fn decode_graph6(line: &str) -> Result<Graph, CodecError> {
    let (base, body) = split_header(line);
    let bytes = body.as_bytes();
    check_bytes(bytes, base)?;
    let (n, used) = read_size(bytes, base)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    let data = &bytes[used..];
    if data.len() < need {
        return Err(CodecError::Truncated { offset: base + bytes.len() });
    }
    if data.len() > need {
        return Err(CodecError::TrailingData { offset: base + used + need });
    }
    let mut g = Graph::new(n);
    let mut r = BitReader { bytes: data, pos: 0 };
    for j in 1..n {
        for i in 0..j {
            if r.bit() {
                g.add_edge(i, j).expect("each pair is read once");
            }
        }
    }
    Ok(g)
}

fn bits_for(n: usize) -> u32 {
    // bits needed to write n-1 in binary
    usize::BITS - n.saturating_sub(1).leading_zeros()
}

pub fn encode_sparse6(g: &Graph) -> Result<String, CodecError> {
    let n = g.order();
    let mut out = vec![b':'];
    write_size(&mut out, n)?;
    let k = bits_for(n);
    let mut w = BitWriter::new(&mut out);
    let mut last = 0usize;
    for j in 0..n {
        for i in g.neighbors(j).filter(|&i| i <= j) {
            if j == last {
                w.push(false);
                w.push_bits(i, k);
            } else {
                w.push(true);
                if j > last + 1 {
                    w.push_bits(j, k);
                    w.push(false);
                }
                w.push_bits(i, k);
                last = j;
            }
        }
    }
    let room = w.room();
    if room > 0 {
        // A run of ones would read back as a loop at n-1 in this one case.
        if room > k && last + 2 == n && n == 1 << k {
            w.push(false);
            w.push_bits(usize::MAX, room - 1);
        } else {
            w.push_bits(usize::MAX, room);
        }
    }
    Ok(String::from_utf8(out).expect("sparse6 output is ASCII"))
}

pub fn decode_sparse6(line: &str) -> Result<Graph, CodecError> {
    let (base, body) = split_header(line);
    let bytes = body.as_bytes();
    if bytes.first() != Some(&b':') {
        return Err(CodecError::MalformedHeader { offset: base });
    }
    let bytes = &bytes[1..];
    let base = base + 1;
    check_bytes(bytes, base)?;
    let (n, used) = read_size(bytes, base)?;
    let data = &bytes[used..];
    let k = bits_for(n);
    let mut g = Graph::new(n);
    let mut r = BitReader { bytes: data, pos: 0 };
    let mut v = 0usize;
    while r.remaining() > k as usize {
        let offset = base + used + r.pos / 6;
        let b = r.bit();
        let x = r.bits(k);
        if b {
            v += 1;
        }
        if v >= n {
            break;
        }
        if x > v {
            v = x;
        } else if g.add_edge(x, v).is_err() {
            // Tolerate the ambiguous padding that reads as a final loop.
            if x == v && r.remaining() < k as usize + 1 {
                break;
            }
            return Err(CodecError::NotSimple { u: x, v, offset });
        }
    }
    Ok(g)
}

pub fn encode(g: &Graph, format: Format) -> Result<String, CodecError> {
    match format {
        Format::Graph6 => encode_graph6(g),
        Format::Sparse6 => encode_sparse6(g),
    }
}

/// Decodes one line, choosing the format from its first byte.
pub fn decode(line: &str) -> Result<Graph, CodecError> {
    match Format::detect(line) {
        Format::Graph6 => decode_graph6(line),
        Format::Sparse6 => decode_sparse6(line),
    }
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("line {line}: {source}")]
    Codec {
        line: usize,
        #[source]
        source: CodecError,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Streams graphs from a reader, one per line. Blank lines and bare
/// format headers are skipped.
pub struct GraphReader<R> {
    input: R,
    buf: String,
    line: usize,
}

impl<R: BufRead> GraphReader<R> {
    pub fn new(input: R) -> Self {
        GraphReader {
            input,
            buf: String::new(),
            line: 0,
        }
    }
}

impl<R: BufRead> Iterator for GraphReader<R> {
    type Item = Result<Graph, ReadError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.input.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line += 1;
            let body = strip_header(&self.buf);
            if body.trim().is_empty() {
                continue;
            }
            let line = self.line;
            let text = self.buf.trim_end_matches(['\n', '\r']);
            return Some(decode(text).map_err(|source| ReadError::Codec { line, source }));
        }
    }
}

/// Writes one graph per line.
pub fn write_graph<W: Write>(out: &mut W, g: &Graph, format: Format) -> io::Result<()> {
    let s = encode(g, format).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
    out.write_all(s.as_bytes())?;
    out.write_all(b"\n")
}
