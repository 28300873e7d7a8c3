//! Bit-exact serialization of Fourier states: CSV records and a small
//! versioned binary container.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::FourierState;
use crate::torus::{IrrationalTorus, LatticePoint, MAX_DIM};

const MAGIC: &[u8; 4] = b"FSTC";
const VERSION: u16 = 1;

pub fn csv_header(dim: usize) -> Vec<String> {
    (1..=dim)
        .map(|j| format!("n{j}"))
        .chain(["re".to_string(), "im".to_string()])
        .collect()
}

/// Writes `n1,…,nd,re,im` records. Floats use the shortest representation
/// that parses back to the same bits.
pub fn write_csv<W: Write>(state: &FourierState, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(state.dim())).map_err(csv_err)?;
    for (n, c) in state.iter() {
        let mut rec: Vec<String> = n.coords().iter().map(|x| x.to_string()).collect();
        rec.push(c.re.to_string());
        rec.push(c.im.to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(torus: IrrationalTorus, input: R) -> Result<FourierState> {
    let d = torus.dim();
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header != csv_header(d) {
        return Err(Error::Format(format!("unexpected CSV header {header:?}")));
    }
    let mut state = FourierState::new(torus);
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |i: usize| -> Result<&str> {
            rec.get(i)
                .ok_or_else(|| Error::Format(format!("record {} is missing column {i}", line + 1)))
        };
        let mut n = [0i64; MAX_DIM];
        for (j, slot) in n.iter_mut().take(d).enumerate() {
            *slot = field(j)?
                .parse()
                .map_err(|e| Error::Format(format!("record {}: {e}", line + 1)))?;
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse().map_err(|e| Error::Format(format!("record {}: {e}", line + 1)))
        };
        let c = Complex64::new(parse_f(field(d)?)?, parse_f(field(d + 1)?)?);
        state.insert(LatticePoint::new(&n[..d]), c)?;
    }
    Ok(state)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

/// Layout (little endian): magic `FSTC`, `u16` version, `u8` dimension,
/// `d` aspect ratios and `C` as `f64`, `u64` record count, then per record
/// `d` `i64` coordinates followed by `re`, `im`.
pub fn write_binary<W: Write>(state: &FourierState, mut out: W) -> Result<()> {
    let torus = state.torus();
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&[torus.dim() as u8])?;
    for a in torus.alphas() {
        out.write_all(&a.to_le_bytes())?;
    }
    out.write_all(&torus.c_bound().to_le_bytes())?;
    out.write_all(&(state.len() as u64).to_le_bytes())?;
    for (n, c) in state.iter() {
        for x in n.coords() {
            out.write_all(&x.to_le_bytes())?;
        }
        out.write_all(&c.re.to_le_bytes())?;
        out.write_all(&c.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_array<const K: usize, R: Read>(input: &mut R) -> Result<[u8; K]> {
    let mut buf = [0u8; K];
    input
        .read_exact(&mut buf)
        .map_err(|e| Error::Format(format!("truncated container: {e}")))?;
    Ok(buf)
}

pub fn read_binary<R: Read>(mut input: R) -> Result<FourierState> {
    if &read_array::<4, _>(&mut input)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u16::from_le_bytes(read_array(&mut input)?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported container version {version}")));
    }
    let d = read_array::<1, _>(&mut input)?[0] as usize;
    if !(1..=MAX_DIM).contains(&d) {
        return Err(Error::Format(format!("bad dimension {d}")));
    }
    let mut alphas = Vec::with_capacity(d);
    for _ in 0..d {
        alphas.push(f64::from_le_bytes(read_array(&mut input)?));
    }
    let c_bound = f64::from_le_bytes(read_array(&mut input)?);
    let torus = IrrationalTorus::new(alphas, c_bound)?;
    let count = u64::from_le_bytes(read_array(&mut input)?);
    let mut state = FourierState::new(torus);
    for _ in 0..count {
        let mut n = [0i64; MAX_DIM];
        for slot in n.iter_mut().take(d) {
            *slot = i64::from_le_bytes(read_array(&mut input)?);
        }
        let re = f64::from_le_bytes(read_array(&mut input)?);
        let im = f64::from_le_bytes(read_array(&mut input)?);
        state.insert(LatticePoint::new(&n[..d]), Complex64::new(re, im))?;
    }
    Ok(state)
}
