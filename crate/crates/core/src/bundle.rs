//! On-disk index format.
//!
//! ```text
//! "DIDX" version:u8 count:u64 (id:u64 offset:u64 len:u64)*count payload...
//! ```
//!
//! All integers are little-endian. Offsets are absolute. Readers skip
//! section ids they do not know. The wavelet matrix and the fingerprint
//! cache are derived data and are rebuilt on load.

use crate::alphabet::Alphabet;
use crate::compressor::PermTable;
use crate::error::{Error, Result};
use crate::extract::{FingerprintTable, Hasher};
use crate::grid::{Axis, AxisHandle, BlindTrie, Grid, GridPoint, PointKind, TrieNode};
use crate::index::{Header, Index};
use crate::measures::Ratio;
use crate::rlslp::{Rlslp, Rule, SymbolId};
use crate::tree::{Occurrence, WeightTable};
use crate::trie::ShortTrie;
use std::collections::HashMap;
use std::path::Path;

pub const MAGIC: &[u8; 4] = b"DIDX";
pub const VERSION: u8 = 1;

pub const SEC_HEADER: u64 = 1;
pub const SEC_ALPHABET: u64 = 2;
pub const SEC_RULES: u64 = 3;
pub const SEC_PERMS: u64 = 4;
pub const SEC_OCCURRENCES: u64 = 5;
pub const SEC_WEIGHTS: u64 = 6;
pub const SEC_GRID: u64 = 7;
pub const SEC_FINGERPRINT: u64 = 8;
pub const SEC_TRIE: u64 = 9;

#[derive(Default)]
struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.u64(v.to_bits());
    }
    fn len(&mut self, v: usize) {
        self.u64(v as u64);
    }
    fn bytes(&mut self, b: &[u8]) {
        self.len(b.len());
        self.0.extend_from_slice(b);
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    section: u64,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8], section: u64) -> Self {
        Reader { buf, pos: 0, section }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::format(self.section, reason)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(self.err(format!("truncated at byte {}", self.pos)));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }
    /// A length prefix, sanity-checked against the remaining bytes.
    fn len(&mut self, min_item: usize) -> Result<usize> {
        let n = self.u64()?;
        let left = (self.buf.len() - self.pos) as u64;
        if n.saturating_mul(min_item.max(1) as u64) > left && min_item > 0 {
            return Err(self.err(format!("length {n} exceeds section size")));
        }
        Ok(n as usize)
    }
    fn bytes(&mut self) -> Result<&'a [u8]> {
        let n = self.len(1)?;
        self.take(n)
    }
    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(self.err("trailing bytes"));
        }
        Ok(())
    }
}

fn write_header(w: &mut Writer, h: &Header) {
    w.u64(h.n);
    w.u32(h.sigma);
    w.u64(h.seed);
    w.u8(h.capped as u8 | (h.over_threshold as u8) << 1);
    w.u64(h.delta.num);
    w.u64(h.delta.den);
    w.u64(h.grammar_size);
    w.u32(h.text_levels);
    w.u32(h.attempt);
    w.u32(h.attempts_made);
    w.f64(h.bound_term);
    w.len(h.level_sizes.len());
    for &s in &h.level_sizes {
        w.u64(s);
    }
}

fn read_header(r: &mut Reader) -> Result<Header> {
    let n = r.u64()?;
    let sigma = r.u32()?;
    let seed = r.u64()?;
    let flags = r.u8()?;
    let (num, den) = (r.u64()?, r.u64()?);
    if den == 0 {
        return Err(r.err("zero δ denominator"));
    }
    let grammar_size = r.u64()?;
    let text_levels = r.u32()?;
    let attempt = r.u32()?;
    let attempts_made = r.u32()?;
    let bound_term = r.f64()?;
    let k = r.len(8)?;
    let level_sizes = (0..k).map(|_| r.u64()).collect::<Result<_>>()?;
    Ok(Header {
        n,
        sigma,
        seed,
        capped: flags & 1 != 0,
        delta: Ratio { num, den },
        grammar_size,
        text_levels,
        level_sizes,
        attempt,
        attempts_made,
        over_threshold: flags & 2 != 0,
        bound_term,
    })
}

fn write_alphabet(w: &mut Writer, a: &Alphabet) {
    match a {
        Alphabet::Dense(s) => {
            w.u8(0);
            w.u32(*s);
        }
        Alphabet::Bytes(b) => {
            w.u8(1);
            w.bytes(b);
        }
        Alphabet::Tokens(t) => {
            w.u8(2);
            w.len(t.len());
            for s in t {
                w.bytes(s.as_bytes());
            }
        }
    }
}

fn read_alphabet(r: &mut Reader) -> Result<Alphabet> {
    Ok(match r.u8()? {
        0 => Alphabet::Dense(r.u32()?),
        1 => Alphabet::Bytes(r.bytes()?.to_vec()),
        2 => {
            let k = r.len(8)?;
            let mut t = Vec::with_capacity(k);
            for _ in 0..k {
                let s = std::str::from_utf8(r.bytes()?).map_err(|_| r.err("token is not UTF-8"))?;
                t.push(s.to_owned());
            }
            Alphabet::Tokens(t)
        }
        tag => return Err(r.err(format!("unknown alphabet tag {tag}"))),
    })
}

fn write_rules(w: &mut Writer, g: &Rlslp) {
    w.u32(g.sigma());
    w.u32(g.start().0);
    w.len(g.rules().len());
    for rule in g.rules() {
        match rule {
            Rule::Block(children) => {
                w.u8(0);
                w.len(children.len());
                for c in children {
                    w.u32(c.0);
                }
            }
            Rule::Run { base, count } => {
                w.u8(1);
                w.u32(base.0);
                w.u64(*count);
            }
        }
    }
}

fn read_rules(r: &mut Reader) -> Result<Rlslp> {
    let sigma = r.u32()?;
    let start = SymbolId(r.u32()?);
    let k = r.len(5)?;
    let mut rules = Vec::with_capacity(k);
    for _ in 0..k {
        rules.push(match r.u8()? {
            0 => {
                let a = r.len(4)?;
                Rule::Block((0..a).map(|_| r.u32().map(SymbolId)).collect::<Result<_>>()?)
            }
            1 => Rule::Run {
                base: SymbolId(r.u32()?),
                count: r.u64()?,
            },
            tag => return Err(r.err(format!("unknown rule tag {tag}"))),
        });
    }
    let g = Rlslp::new(sigma, rules, start).map_err(|e| r.err(e.to_string()))?;
    let v = g.validate();
    if !v.is_empty() {
        return Err(r.err(format!("invalid grammar: {:?}", v[0])));
    }
    Ok(g)
}

fn write_perms(w: &mut Writer, p: &PermTable) {
    w.len(p.num_levels());
    for k in 0..p.num_levels() {
        let lvl = p.sorted_level(k);
        w.len(lvl.len());
        for (a, rank) in lvl {
            w.u32(a.0);
            w.u32(rank);
        }
    }
}

fn read_perms(r: &mut Reader) -> Result<PermTable> {
    let k = r.len(8)?;
    let mut levels = Vec::with_capacity(k);
    for _ in 0..k {
        let c = r.len(8)?;
        let mut m = HashMap::with_capacity(c);
        for _ in 0..c {
            m.insert(SymbolId(r.u32()?), r.u32()?);
        }
        levels.push(m);
    }
    Ok(PermTable::from_levels(levels))
}

fn write_occurrences(w: &mut Writer, occ: &[Vec<Occurrence>]) {
    w.len(occ.len());
    for list in occ {
        w.len(list.len());
        for o in list {
            w.u32(o.parent.0);
            w.u64(o.offset);
        }
    }
}

fn read_occurrences(r: &mut Reader, g: &Rlslp) -> Result<Vec<Vec<Occurrence>>> {
    let k = r.len(8)?;
    if k != g.num_symbols() {
        return Err(r.err(format!("{k} lists for {} symbols", g.num_symbols())));
    }
    let mut out = Vec::with_capacity(k);
    for a in 0..k {
        let c = r.len(12)?;
        let mut list = Vec::with_capacity(c);
        for _ in 0..c {
            let parent = SymbolId(r.u32()?);
            let offset = r.u64()?;
            // parents must be later symbols containing the child, which also
            // rules out cycles during upward propagation
            if parent.index() <= a
                || parent.index() >= k
                || offset + g.len_of(SymbolId(a as u32)) > g.len_of(parent)
            {
                return Err(r.err(format!("bad occurrence of symbol {a}")));
            }
            list.push(Occurrence { parent, offset });
        }
        out.push(list);
    }
    Ok(out)
}

fn write_axis(w: &mut Writer, axis: &Axis) {
    w.len(axis.handles.len());
    for h in &axis.handles {
        match *h {
            AxisHandle::Reversed(a) => {
                w.u8(0);
                w.u32(a.0);
            }
            AxisHandle::Suffix { symbol, offset } => {
                w.u8(1);
                w.u32(symbol.0);
                w.u64(offset);
            }
        }
    }
    let t = &axis.trie;
    w.len(t.nodes.len());
    for n in &t.nodes {
        w.u64(n.depth);
        w.u32(n.lo);
        w.u32(n.hi);
        w.u32(n.first_child);
        w.u32(n.num_children);
    }
    w.len(t.child_keys.len());
    for (k, c) in t.child_keys.iter().zip(&t.child_ids) {
        w.u32(*k);
        w.u32(*c);
    }
}

fn read_axis(r: &mut Reader, g: &Rlslp) -> Result<Axis> {
    let k = r.len(5)?;
    let mut handles = Vec::with_capacity(k);
    for _ in 0..k {
        let h = match r.u8()? {
            0 => AxisHandle::Reversed(SymbolId(r.u32()?)),
            1 => AxisHandle::Suffix {
                symbol: SymbolId(r.u32()?),
                offset: r.u64()?,
            },
            tag => return Err(r.err(format!("unknown axis handle tag {tag}"))),
        };
        let (a, off) = match h {
            AxisHandle::Reversed(a) => (a, 0),
            AxisHandle::Suffix { symbol, offset } => (symbol, offset),
        };
        if a.index() >= g.num_symbols() || off > g.len_of(a) {
            return Err(r.err("axis handle out of range"));
        }
        handles.push(h);
    }
    let nn = r.len(24)?;
    let mut nodes = Vec::with_capacity(nn);
    for _ in 0..nn {
        nodes.push(TrieNode {
            depth: r.u64()?,
            lo: r.u32()?,
            hi: r.u32()?,
            first_child: r.u32()?,
            num_children: r.u32()?,
        });
    }
    let ne = r.len(8)?;
    let (mut child_keys, mut child_ids) = (Vec::with_capacity(ne), Vec::with_capacity(ne));
    for _ in 0..ne {
        child_keys.push(r.u32()?);
        child_ids.push(r.u32()?);
    }
    for n in &nodes {
        if n.lo > n.hi
            || n.hi as usize >= k
            || n.first_child as usize + n.num_children as usize > ne
        {
            return Err(r.err("trie node out of range"));
        }
    }
    if child_ids.iter().any(|&c| c as usize >= nn) || (k > 0 && nn == 0) {
        return Err(r.err("trie edge out of range"));
    }
    Ok(Axis {
        handles,
        trie: BlindTrie {
            nodes,
            child_keys,
            child_ids,
        },
    })
}

fn write_point(w: &mut Writer, p: &GridPoint) {
    w.u32(p.x);
    w.u32(p.y);
    w.u32(p.parent.0);
    w.u32(p.child);
    w.u64(p.offset);
    w.u64(p.weight);
    if let PointKind::Run { count, base_len } = p.kind {
        w.u64(count);
        w.u64(base_len);
    }
}

fn read_point(r: &mut Reader, run: bool, g: &Rlslp, nx: usize, ny: usize) -> Result<GridPoint> {
    let x = r.u32()?;
    let y = r.u32()?;
    let parent = SymbolId(r.u32()?);
    let child = r.u32()?;
    let offset = r.u64()?;
    let weight = r.u64()?;
    let kind = if run {
        PointKind::Run {
            count: r.u64()?,
            base_len: r.u64()?,
        }
    } else {
        PointKind::Block
    };
    if x as usize >= nx || y as usize >= ny {
        return Err(r.err("grid point rank out of range"));
    }
    if parent.index() >= g.num_symbols() || offset > g.len_of(parent) {
        return Err(r.err("grid point locus out of range"));
    }
    if let PointKind::Run { base_len, .. } = kind {
        if base_len == 0 {
            return Err(r.err("run point with empty base"));
        }
    }
    Ok(GridPoint {
        x,
        y,
        parent,
        child,
        offset,
        kind,
        weight,
    })
}

fn write_grid(w: &mut Writer, grid: &Grid) {
    write_axis(w, &grid.x_axis);
    write_axis(w, &grid.y_axis);
    w.len(grid.block_points.len());
    for p in &grid.block_points {
        write_point(w, p);
    }
    w.len(grid.run_points.len());
    for p in &grid.run_points {
        write_point(w, p);
    }
}

fn read_grid(r: &mut Reader, g: &Rlslp) -> Result<Grid> {
    let x_axis = read_axis(r, g)?;
    let y_axis = read_axis(r, g)?;
    let (nx, ny) = (x_axis.len(), y_axis.len());
    let nb = r.len(32)?;
    let block = (0..nb).map(|_| read_point(r, false, g, nx, ny)).collect::<Result<_>>()?;
    let nr = r.len(48)?;
    let run = (0..nr).map(|_| read_point(r, true, g, nx, ny)).collect::<Result<_>>()?;
    Ok(Grid::from_parts(x_axis, y_axis, block, run))
}

impl Index {
    /// Serializes the index.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut sections: Vec<(u64, Vec<u8>)> = Vec::new();
        let mut add = |id: u64, f: &dyn Fn(&mut Writer)| {
            let mut w = Writer::default();
            f(&mut w);
            sections.push((id, w.0));
        };
        add(SEC_HEADER, &|w| write_header(w, &self.header));
        add(SEC_ALPHABET, &|w| write_alphabet(w, &self.alphabet));
        add(SEC_RULES, &|w| write_rules(w, &self.grammar));
        add(SEC_PERMS, &|w| write_perms(w, &self.perms));
        add(SEC_OCCURRENCES, &|w| write_occurrences(w, &self.occurrences));
        add(SEC_WEIGHTS, &|w| {
            w.len(self.weights.w.len());
            for &x in &self.weights.w {
                w.u64(x);
            }
        });
        add(SEC_GRID, &|w| write_grid(w, &self.grid));
        add(SEC_FINGERPRINT, &|w| w.u64(self.fingerprints.hasher().base));
        add(SEC_TRIE, &|w| {
            w.len(self.short_trie.depth());
            let edges = self.short_trie.edges();
            w.len(edges.len());
            for (p, c, u) in edges {
                w.u32(p);
                w.u32(c);
                w.u32(u);
            }
        });
        assemble_file(&sections)
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Index> {
        let sections = split_file(buf)?;
        let get = |id: u64| -> Result<Reader> {
            sections
                .get(&id)
                .map(|s| Reader::new(s, id))
                .ok_or_else(|| Error::format(id, "missing section"))
        };

        let mut r = get(SEC_HEADER)?;
        let header = read_header(&mut r)?;
        r.finish()?;

        let mut r = get(SEC_ALPHABET)?;
        let alphabet = read_alphabet(&mut r)?;
        r.finish()?;
        if alphabet.size() != header.sigma {
            return Err(Error::format(SEC_ALPHABET, "alphabet size differs from header σ"));
        }

        let mut r = get(SEC_RULES)?;
        let grammar = read_rules(&mut r)?;
        r.finish()?;
        if grammar.sigma() != header.sigma || grammar.text_len() != header.n {
            return Err(Error::format(SEC_RULES, "grammar does not match header"));
        }

        let mut r = get(SEC_PERMS)?;
        let perms = read_perms(&mut r)?;
        r.finish()?;

        let mut r = get(SEC_OCCURRENCES)?;
        let occurrences = read_occurrences(&mut r, &grammar)?;
        r.finish()?;

        let mut r = get(SEC_WEIGHTS)?;
        let k = r.len(8)?;
        let w = (0..k).map(|_| r.u64()).collect::<Result<Vec<_>>>()?;
        r.finish()?;
        if k != grammar.num_symbols() {
            return Err(Error::format(SEC_WEIGHTS, "weight count differs from symbol count"));
        }
        let weights = WeightTable { w };

        let mut r = get(SEC_GRID)?;
        let grid = read_grid(&mut r, &grammar)?;
        r.finish()?;

        let mut r = get(SEC_FINGERPRINT)?;
        let base = r.u64()?;
        r.finish()?;
        let fingerprints = FingerprintTable::new(&grammar, Hasher { base });

        let mut r = get(SEC_TRIE)?;
        let depth = r.len(0)?;
        let ne = r.len(12)?;
        let mut edges = Vec::with_capacity(ne);
        for i in 0..ne {
            let (p, c, u) = (r.u32()?, r.u32()?, r.u32()?);
            if u as usize != i + 1 || p >= u {
                return Err(r.err("trie edges out of order"));
            }
            edges.push((p, c, u));
        }
        r.finish()?;
        let short_trie = ShortTrie::from_edges(depth, edges);

        Ok(Index::assemble(
            header,
            alphabet,
            grammar,
            perms,
            occurrences,
            weights,
            grid,
            fingerprints,
            short_trie,
        ))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Index> {
        Index::from_bytes(&std::fs::read(path)?)
    }
}

/// Payload of the grid section, for tools that rewrite a bundle.
pub fn grid_section(grid: &Grid) -> Vec<u8> {
    let mut w = Writer::default();
    write_grid(&mut w, grid);
    w.0
}

/// Writes magic, version, section table and payloads.
pub fn assemble_file(sections: &[(u64, Vec<u8>)]) -> Vec<u8> {
    let table_len = 8 + 24 * sections.len();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(sections.len() as u64).to_le_bytes());
    let mut offset = (MAGIC.len() + 1 + table_len) as u64;
    for (id, payload) in sections {
        out.extend_from_slice(&id.to_le_bytes());
        out.extend_from_slice(&offset.to_le_bytes());
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        offset += payload.len() as u64;
    }
    for (_, payload) in sections {
        out.extend_from_slice(payload);
    }
    out
}

/// Parses the section table; the last section with a given id wins.
pub fn split_file(buf: &[u8]) -> Result<HashMap<u64, &[u8]>> {
    if buf.len() < 5 || &buf[..4] != MAGIC {
        return Err(Error::format(0, "bad magic"));
    }
    if buf[4] != VERSION {
        return Err(Error::format(0, format!("unsupported version {}", buf[4])));
    }
    let mut r = Reader::new(&buf[5..], 0);
    let count = r.len(24)?;
    let mut out = HashMap::new();
    for _ in 0..count {
        let (id, off, len) = (r.u64()?, r.u64()?, r.u64()?);
        let end = off.checked_add(len).filter(|&e| e <= buf.len() as u64);
        let Some(end) = end else {
            return Err(Error::format(id, "section extends past end of file"));
        };
        out.insert(id, &buf[off as usize..end as usize]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::IndexConfig;

    fn sample() -> Index {
        Index::build_bytes(b"abracadabra abracadabra cadabra", &IndexConfig::default()).unwrap()
    }

    #[test]
    fn round_trip() {
        let idx = sample();
        let bytes = idx.to_bytes();
        let back = Index::from_bytes(&bytes).unwrap();
        assert!(back == idx);
        assert_eq!(back.to_bytes(), bytes);
        let t = Index::build_tokens("a rose is a rose is a rose", &IndexConfig::default()).unwrap();
        assert!(Index::from_bytes(&t.to_bytes()).unwrap() == t);
    }

    #[test]
    fn deterministic() {
        assert_eq!(sample().to_bytes(), sample().to_bytes());
    }

    #[test]
    fn unknown_sections_are_skipped() {
        let idx = sample();
        let bytes = idx.to_bytes();
        let mut sections: Vec<(u64, Vec<u8>)> = split_file(&bytes)
            .unwrap()
            .into_iter()
            .map(|(k, v)| (k, v.to_vec()))
            .collect();
        sections.sort();
        sections.insert(2, (999, vec![1, 2, 3]));
        let back = Index::from_bytes(&assemble_file(&sections)).unwrap();
        assert!(back == idx);
    }

    #[test]
    fn malformed_inputs() {
        let bytes = sample().to_bytes();
        assert!(matches!(Index::from_bytes(b"NOPE"), Err(Error::Format { section: 0, .. })));
        let mut v = bytes.clone();
        v[4] = 2;
        assert!(matches!(Index::from_bytes(&v), Err(Error::Format { section: 0, .. })));
        // truncation lands inside the last section's payload
        let cut = &bytes[..bytes.len() - 3];
        assert!(matches!(Index::from_bytes(cut), Err(Error::Format { .. })));
        let mut sections: Vec<(u64, Vec<u8>)> = split_file(&bytes)
            .unwrap()
            .into_iter()
            .filter(|(k, _)| *k != SEC_GRID)
            .map(|(k, v)| (k, v.to_vec()))
            .collect();
        sections.sort();
        assert!(matches!(
            Index::from_bytes(&assemble_file(&sections)),
            Err(Error::Format { section: SEC_GRID, .. })
        ));
    }
}
