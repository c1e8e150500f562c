//! Text cache for structure constants.
//!
//! ```text
//! scheme n p d
//! G_00 G_11 ... G_(d-1)(d-1)
//! a b c value
//! ...
//! ```
//!
//! Indices are zero based, values use the shortest round-trip decimal form,
//! and Scheme 1 files store `p = 0`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use sun_einstein::liealg::{build_scheme1_basis, build_scheme2_basis};
use sun_einstein::{structure_constants, Ansatz, GeneratorBasis, Scheme, StructureConstants};

pub fn file_name(scheme: Scheme, n: usize, p: Option<usize>) -> String {
    format!("f_s{}_n{}_p{}.sc", scheme.number(), n, p.unwrap_or(0))
}

pub fn write_constants(
    path: &Path,
    scheme: Scheme,
    n: usize,
    p: Option<usize>,
    sc: &StructureConstants,
) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("{} {} {} {}\n", scheme.number(), n, p.unwrap_or(0), sc.dim()));
    let gram: Vec<String> = sc.gram_diagonal().iter().map(|g| g.to_string()).collect();
    out.push_str(&gram.join(" "));
    out.push('\n');
    for (a, b, c, v) in sc.nonzeros() {
        out.push_str(&format!("{a} {b} {c} {v}\n"));
    }
    // Write then rename so a concurrent reader never sees half a file.
    let tmp = path.with_extension("sc.tmp");
    let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    f.write_all(out.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_constants(
    path: &Path,
    scheme: Scheme,
    n: usize,
    p: Option<usize>,
) -> Result<StructureConstants> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header: Vec<usize> = lines
        .next()
        .context("empty cache file")?
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .context("bad cache header")?;
    ensure!(header.len() == 4, "cache header needs `scheme n p d`");
    let want = [usize::from(scheme.number()), n, p.unwrap_or(0)];
    ensure!(header[..3] == want, "cache header {:?} does not match {:?}", &header[..3], want);
    let d = header[3];
    ensure!(d == n * n - 1, "cache dimension {d} is not n^2 - 1");

    let gram: Vec<f64> = lines
        .next()
        .context("missing Gram line")?
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .context("bad Gram line")?;
    ensure!(gram.len() == d, "Gram line has {} entries, expected {d}", gram.len());
    let mut dense = vec![0.0; d * d];
    for (a, g) in gram.iter().enumerate() {
        dense[a * d + a] = *g;
    }

    let mut entries = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            bail!("cache line {}: expected `a b c value`", lineno + 3);
        }
        let idx = |s: &str| -> Result<usize> {
            let v: usize = s.parse().with_context(|| format!("cache line {}", lineno + 3))?;
            ensure!(v < d, "cache line {}: index {v} out of range", lineno + 3);
            Ok(v)
        };
        let value: f64 = fields[3].parse().with_context(|| format!("cache line {}", lineno + 3))?;
        entries.push((idx(fields[0])?, idx(fields[1])?, idx(fields[2])?, value));
    }
    let sc = StructureConstants::from_parts(d, dense, &entries);
    ensure!(sc.antisymmetry_defect() < 1e-12, "cached structure constants are not antisymmetric");
    Ok(sc)
}

pub fn build_basis(scheme: Scheme, n: usize, p: Option<usize>) -> Result<GeneratorBasis> {
    Ok(match scheme {
        Scheme::One => build_scheme1_basis(n)?,
        Scheme::Two => build_scheme2_basis(n, p.unwrap_or(0))?,
    })
}

/// Structure constants from `dir` if cached there, otherwise computed and
/// (when `dir` is given) stored.
pub fn load_or_compute(
    dir: Option<&Path>,
    basis: &GeneratorBasis,
) -> Result<(StructureConstants, Option<PathBuf>)> {
    let (scheme, n, p) = (basis.scheme, basis.n, basis.p);
    let Some(dir) = dir else {
        return Ok((structure_constants(basis)?, None));
    };
    let path = dir.join(file_name(scheme, n, p));
    if path.exists() {
        let sc = read_constants(&path, scheme, n, p)?;
        return Ok((sc, Some(path)));
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let sc = structure_constants(basis)?;
    write_constants(&path, scheme, n, p, &sc)?;
    Ok((sc, Some(path)))
}

pub fn ansatz(dir: Option<&Path>, scheme: Scheme, n: usize, p: Option<usize>) -> Result<Ansatz> {
    let basis = build_basis(scheme, n, p)?;
    let (sc, _) = load_or_compute(dir, &basis)?;
    Ok(Ansatz::from_parts(basis, sc)?)
}
