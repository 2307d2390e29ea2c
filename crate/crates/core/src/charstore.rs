//! Run-length encoded on-disk character lists.
//!
//! A store file is
//!
//! ```text
//! "CTBLSTR1" | group hash (32) | class count (uleb) | class ordering hash (32) | record*
//! record = tag (1) | payload length (uleb) | payload
//! ```
//!
//! Tag `D` appends a canonical cyclotomic string to the shared value
//! dictionary. Tag `C` holds a character: a degree field (`0`, or `1` followed
//! by a signed leb degree) and a run count followed by `(count, value id)`
//! pairs. Writers only append, so a file cut short keeps every complete record.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use num::{BigRational, ToPrimitive};

use crate::character::{sort_canonical, ClassFunction};
use crate::class_data::TableHeader;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"CTBLSTR1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoreHeader {
    pub group_hash: [u8; 32],
    pub class_count: usize,
    pub ordering_hash: [u8; 32],
}

impl StoreHeader {
    pub fn of(header: &TableHeader) -> Self {
        StoreHeader {
            group_hash: header.fingerprint(),
            class_count: header.num_classes(),
            ordering_hash: header.ordering_hash(),
        }
    }

    /// Owner tag of class functions over this group, as in [`TableHeader::owner_tag`].
    pub fn owner_tag(&self) -> u64 {
        u64::from_le_bytes(self.group_hash[..8].try_into().unwrap())
    }

    fn write(&self, out: &mut impl Write) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&self.group_hash)?;
        leb128::write::unsigned(out, self.class_count as u64)?;
        out.write_all(&self.ordering_hash)?;
        Ok(())
    }
}

/// Interned canonical value strings.
#[derive(Clone, Debug, Default)]
pub struct Dictionary {
    values: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Dictionary {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<&str> {
        self.values.get(id as usize).map(String::as_str)
    }

    /// Id of `value`, and whether it was newly added.
    pub fn intern(&mut self, value: &str) -> (u32, bool) {
        if let Some(&id) = self.ids.get(value) {
            return (id, false);
        }
        let id = self.values.len() as u32;
        self.values.push(value.to_string());
        self.ids.insert(value.to_string(), id);
        (id, true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RleCharacterRecord {
    /// Value at the identity class when it is an integer.
    pub degree: Option<i64>,
    /// Maximal runs of `(count, value id)`.
    pub runs: Vec<(u32, u32)>,
}

pub fn encode(chi: &ClassFunction, dict: &mut Dictionary) -> RleCharacterRecord {
    let degree = chi
        .degree()
        .try_rational()
        .filter(BigRational::is_integer)
        .and_then(|d| d.to_integer().to_i64());
    let mut runs: Vec<(u32, u32)> = Vec::new();
    for v in chi.values() {
        let (id, _) = dict.intern(&v.canonical());
        match runs.last_mut() {
            Some((count, last)) if *last == id => *count += 1,
            _ => runs.push((1, id)),
        }
    }
    RleCharacterRecord { degree, runs }
}

pub fn decode(rec: &RleCharacterRecord, dict: &Dictionary, header: &StoreHeader) -> Result<ClassFunction> {
    let total: u64 = rec.runs.iter().map(|&(c, _)| c as u64).sum();
    if total != header.class_count as u64 {
        return Err(Error::Store(format!("runs cover {total} classes, expected {}", header.class_count)));
    }
    let mut values = Vec::with_capacity(header.class_count);
    for &(count, id) in &rec.runs {
        let text = dict.get(id).ok_or_else(|| Error::Store(format!("undefined value id {id}")))?;
        let v: Cyclotomic = text.parse()?;
        for _ in 0..count {
            values.push(v.clone());
        }
    }
    ClassFunction::with_owner(values, header.class_count, header.owner_tag())
}

fn record_bytes(rec: &RleCharacterRecord) -> Vec<u8> {
    let mut buf = Vec::new();
    match rec.degree {
        None => buf.push(0),
        Some(d) => {
            buf.push(1);
            leb128::write::signed(&mut buf, d).expect("vec write");
        }
    }
    leb128::write::unsigned(&mut buf, rec.runs.len() as u64).expect("vec write");
    for &(count, id) in &rec.runs {
        leb128::write::unsigned(&mut buf, count as u64).expect("vec write");
        leb128::write::unsigned(&mut buf, id as u64).expect("vec write");
    }
    buf
}

fn write_record(out: &mut impl Write, tag: u8, payload: &[u8]) -> Result<()> {
    out.write_all(&[tag])?;
    leb128::write::unsigned(out, payload.len() as u64)?;
    out.write_all(payload)?;
    Ok(())
}

/// Appending writer for one store segment.
pub struct StoreWriter {
    out: BufWriter<File>,
    dict: Dictionary,
    header: StoreHeader,
    written: usize,
}

impl StoreWriter {
    pub fn create(path: impl AsRef<Path>, header: &TableHeader) -> Result<Self> {
        Self::create_raw(path, StoreHeader::of(header))
    }

    fn create_raw(path: impl AsRef<Path>, header: StoreHeader) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        header.write(&mut out)?;
        Ok(StoreWriter { out, dict: Dictionary::default(), header, written: 0 })
    }

    pub fn append(&mut self, chi: &ClassFunction) -> Result<()> {
        if chi.len() != self.header.class_count || chi.owner() != self.header.owner_tag() {
            return Err(Error::HeaderMismatch);
        }
        let before = self.dict.len();
        let rec = encode(chi, &mut self.dict);
        for id in before..self.dict.len() {
            let text = self.dict.get(id as u32).expect("just interned").to_string();
            write_record(&mut self.out, b'D', text.as_bytes())?;
        }
        write_record(&mut self.out, b'C', &record_bytes(&rec))?;
        self.written += 1;
        Ok(())
    }

    pub fn written(&self) -> usize {
        self.written
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Contents of a store file.
#[derive(Clone, Debug)]
pub struct Store {
    pub header: StoreHeader,
    pub characters: Vec<ClassFunction>,
    /// Byte length of the complete-record prefix.
    pub valid_len: usize,
    /// Whether trailing bytes held an incomplete record.
    pub truncated: bool,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Option<&[u8]> {
        let s = self.data.get(self.pos..self.pos + n)?;
        self.pos += n;
        Some(s)
    }

    fn uleb(&mut self) -> Option<u64> {
        let mut rest = &self.data[self.pos..];
        let before = rest.len();
        let v = leb128::read::unsigned(&mut rest).ok()?;
        self.pos += before - rest.len();
        Some(v)
    }

    fn sleb(&mut self) -> Option<i64> {
        let mut rest = &self.data[self.pos..];
        let before = rest.len();
        let v = leb128::read::signed(&mut rest).ok()?;
        self.pos += before - rest.len();
        Some(v)
    }
}

fn parse_character(payload: &[u8]) -> Result<RleCharacterRecord> {
    let bad = || Error::Store("malformed character record".into());
    let mut c = Cursor { data: payload, pos: 0 };
    let degree = match c.take(1).ok_or_else(bad)?[0] {
        0 => None,
        1 => Some(c.sleb().ok_or_else(bad)?),
        _ => return Err(bad()),
    };
    let n = c.uleb().ok_or_else(bad)?;
    let mut runs = Vec::with_capacity(n.min(1 << 16) as usize);
    for _ in 0..n {
        let count = c.uleb().ok_or_else(bad)? as u32;
        let id = c.uleb().ok_or_else(bad)? as u32;
        if count == 0 {
            return Err(bad());
        }
        runs.push((count, id));
    }
    if c.pos != payload.len() {
        return Err(bad());
    }
    Ok(RleCharacterRecord { degree, runs })
}

pub fn parse_store(data: &[u8]) -> Result<Store> {
    let mut c = Cursor { data, pos: 0 };
    let short = || Error::Store("incomplete store header".into());
    if c.take(8).ok_or_else(short)? != MAGIC {
        return Err(Error::Store("not a character store".into()));
    }
    let group_hash: [u8; 32] = c.take(32).ok_or_else(short)?.try_into().unwrap();
    let class_count = c.uleb().ok_or_else(short)? as usize;
    let ordering_hash: [u8; 32] = c.take(32).ok_or_else(short)?.try_into().unwrap();
    let header = StoreHeader { group_hash, class_count, ordering_hash };
    let mut dict = Dictionary::default();
    let mut characters = Vec::new();
    let mut valid_len = c.pos;
    let mut truncated = false;
    while c.pos < data.len() {
        let Some(tag) = c.take(1).map(|t| t[0]) else { break };
        let Some(len) = c.uleb() else {
            truncated = true;
            break;
        };
        let Some(payload) = c.take(len as usize) else {
            truncated = true;
            break;
        };
        match tag {
            b'D' => {
                let text = std::str::from_utf8(payload).map_err(|_| Error::Store("invalid dictionary entry".into()))?;
                dict.intern(text);
            }
            b'C' => {
                let rec = parse_character(payload)?;
                characters.push(decode(&rec, &dict, &header)?);
            }
            t => return Err(Error::Store(format!("unknown record tag {t:#04x}"))),
        }
        valid_len = c.pos;
    }
    Ok(Store { header, characters, valid_len, truncated })
}

pub fn read_store(path: impl AsRef<Path>) -> Result<Store> {
    let mut data = Vec::new();
    File::open(path)?.read_to_end(&mut data)?;
    parse_store(&data)
}

/// Cuts an interrupted segment back to its last complete record.
pub fn recover(path: impl AsRef<Path>) -> Result<Store> {
    let store = read_store(&path)?;
    if store.truncated {
        let f = std::fs::OpenOptions::new().write(true).open(&path)?;
        f.set_len(store.valid_len as u64)?;
    }
    Ok(store)
}

/// Writes characters to a fresh store in the given order.
pub fn write_store(path: impl AsRef<Path>, header: &StoreHeader, chars: &[ClassFunction]) -> Result<()> {
    let mut w = StoreWriter::create_raw(path, header.clone())?;
    for chi in chars {
        w.append(chi)?;
    }
    w.finish()
}

/// Union of segments, deduplicated by value vector and canonically sorted.
pub fn merge(segments: &[impl AsRef<Path>], out: impl AsRef<Path>) -> Result<Store> {
    let mut header: Option<StoreHeader> = None;
    let mut all = Vec::new();
    for seg in segments {
        let s = read_store(seg)?;
        match &header {
            None => header = Some(s.header.clone()),
            Some(h) if *h != s.header => return Err(Error::HeaderMismatch),
            Some(_) => {}
        }
        all.extend(s.characters);
    }
    let header = header.ok_or_else(|| Error::Store("nothing to merge".into()))?;
    sort_canonical(&mut all);
    write_store(&out, &header, &all)?;
    read_store(out)
}

/// One character per line, canonical values separated by commas.
pub fn export_text(chars: &[ClassFunction]) -> String {
    let mut s = String::new();
    for chi in chars {
        s.push_str(&chi.canonical_values().join(","));
        s.push('\n');
    }
    s
}

/// Plain text length over encoded length for a character list.
pub fn compression_ratio(header: &TableHeader, chars: &[ClassFunction]) -> f64 {
    let mut buf = Vec::new();
    StoreHeader::of(header).write(&mut buf).expect("vec write");
    let mut dict = Dictionary::default();
    for chi in chars {
        let before = dict.len();
        let rec = encode(chi, &mut dict);
        for id in before..dict.len() {
            write_record(&mut buf, b'D', dict.get(id as u32).unwrap().as_bytes()).expect("vec write");
        }
        write_record(&mut buf, b'C', &record_bytes(&rec)).expect("vec write");
    }
    export_text(chars).len() as f64 / buf.len() as f64
}
