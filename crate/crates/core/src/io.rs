//! Candidate files (FCF), certificate reports and TSV plot data.
//!
//! FCF layout:
//!
//! ```text
//! # fhit-fcf v1
//! # model = standard-forced
//! # n = 64
//! # kappa = 1.3
//! # eps_map = 0.5
//! # omega = golden
//! # section = K0
//! # kind = torus
//! # components = 2
//! # real = true
//! 0 -31 <re> <im>
//! ...
//! ```
//!
//! followed by sections `P1`, `P2` (`kind = matrix 2 2`, components
//! row-major) and `Lambda` (`kind = diagonal`, only `k = 0`). A coefficient
//! is either `re im` (a point) or `re_lo re_hi im_lo im_hi`. Numbers are
//! written with 17 significant digits, which round-trips every double.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fft::SpectralCoeffs;
use crate::interval::{ComplexInterval, RealInterval};
use crate::map::{golden_mean, SkewMapParams};
use crate::matrix::{FourierMatrix, IMat};
use crate::series::FourierSeries;
use crate::validator::{CandidateData, Certificate};

pub const FCF_TAG: &str = "fhit-fcf v1";

/// The rotation number as written in a file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OmegaSpec {
    Golden,
    Value(f64),
}

impl OmegaSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "golden" {
            return Ok(OmegaSpec::Golden);
        }
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(OmegaSpec::Value)
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("omega must be 'golden' or a decimal, got '{s}'"),
            })
    }

    pub fn enclosure(&self) -> RealInterval {
        match self {
            OmegaSpec::Golden => golden_mean(),
            OmegaSpec::Value(x) => RealInterval::point(*x),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            OmegaSpec::Golden => crate::map::golden_mean_f64(),
            OmegaSpec::Value(x) => *x,
        }
    }
}

impl std::fmt::Display for OmegaSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OmegaSpec::Golden => f.write_str("golden"),
            OmegaSpec::Value(x) => write!(f, "{x:.16e}"),
        }
    }
}

/// A candidate together with the map it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateFile {
    pub model: String,
    pub kappa: f64,
    pub eps_map: f64,
    pub omega: OmegaSpec,
    pub data: CandidateData,
}

impl CandidateFile {
    pub fn map_params(&self) -> SkewMapParams {
        SkewMapParams {
            kappa: self.kappa,
            eps_map: self.eps_map,
            omega: self.omega.enclosure(),
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_coeff(out: &mut String, comp: usize, k: i64, c: &ComplexInterval) {
    if c.is_point() {
        let _ = writeln!(out, "{comp} {k} {} {}", num(c.re.lo()), num(c.im.lo()));
    } else {
        let _ = writeln!(
            out,
            "{comp} {k} {} {} {} {}",
            num(c.re.lo()),
            num(c.re.hi()),
            num(c.im.lo()),
            num(c.im.hi())
        );
    }
}

fn write_section(out: &mut String, name: &str, kind: &str, entries: &[FourierSeries]) {
    let real = entries.iter().all(FourierSeries::is_real_analytic);
    let _ = writeln!(
        out,
        "# section = {name}\n# kind = {kind}\n# components = {}\n# real = {real}",
        entries.len()
    );
    for (comp, s) in entries.iter().enumerate() {
        for (k, c) in s.coeffs().iter() {
            write_coeff(out, comp, k, c);
        }
    }
}

pub fn fcf_to_string(file: &CandidateFile) -> String {
    let d = &file.data;
    let mut out = String::new();
    let _ = writeln!(out, "# {FCF_TAG}");
    let _ = writeln!(out, "# model = {}", file.model);
    let _ = writeln!(out, "# n = {}", d.n());
    let _ = writeln!(out, "# kappa = {}", num(file.kappa));
    let _ = writeln!(out, "# eps_map = {}", num(file.eps_map));
    let _ = writeln!(out, "# omega = {}", file.omega);
    let m = d.dim();
    write_section(&mut out, "K0", "torus", d.k0.entries());
    write_section(&mut out, "P1", &format!("matrix {m} {m}"), d.p1.entries());
    write_section(&mut out, "P2", &format!("matrix {m} {m}"), d.p2.entries());
    let _ = writeln!(
        out,
        "# section = Lambda\n# kind = diagonal\n# components = {m}\n# real = true"
    );
    for i in 0..m {
        write_coeff(&mut out, i, 0, &d.lambda.get(i, i));
    }
    out
}

pub fn save_fcf(file: &CandidateFile, path: &Path) -> Result<()> {
    std::fs::write(path, fcf_to_string(file))?;
    Ok(())
}

pub fn load_fcf(path: &Path) -> Result<CandidateFile> {
    parse_fcf(&std::fs::read_to_string(path)?)
}

struct Section {
    name: String,
    kind: String,
    components: usize,
    real: bool,
    header_line: usize,
    body: Vec<(usize, Vec<ComplexInterval>, Vec<bool>)>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| perr(line, format!("bad number '{tok}'")))
}

fn parse_interval(lo: &str, hi: &str, line: usize) -> Result<RealInterval> {
    RealInterval::new(parse_f64(lo, line)?, parse_f64(hi, line)?).map_err(|_| perr(line, "interval with lo > hi"))
}

pub fn parse_fcf(text: &str) -> Result<CandidateFile> {
    let mut header: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut sections: Vec<Section> = Vec::new();
    let mut pending: BTreeMap<String, String> = BTreeMap::new();
    let mut saw_tag = false;
    let mut n: Option<usize> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(h) = l.strip_prefix('#') {
            let h = h.trim();
            if h == FCF_TAG {
                saw_tag = true;
                continue;
            }
            let Some((key, val)) = h.split_once('=') else {
                return Err(perr(line, format!("header line without '=': '{h}'")));
            };
            let (key, val) = (key.trim().to_string(), val.trim().to_string());
            match key.as_str() {
                "section" => {
                    if let Some(s) = sections.last() {
                        close_section(s, n.unwrap_or(0), line)?;
                    }
                    sections.push(Section {
                        name: val,
                        kind: String::new(),
                        components: 0,
                        real: false,
                        header_line: line,
                        body: Vec::new(),
                    });
                    pending.clear();
                }
                "kind" | "components" | "real" => {
                    let s = sections
                        .last_mut()
                        .ok_or_else(|| perr(line, format!("'{key}' outside a section")))?;
                    match key.as_str() {
                        "kind" => s.kind = val,
                        "components" => {
                            s.components = val.parse().map_err(|_| perr(line, "bad component count"))?;
                        }
                        _ => {
                            s.real = match val.as_str() {
                                "true" => true,
                                "false" => false,
                                _ => return Err(perr(line, "real must be true or false")),
                            }
                        }
                    }
                    pending.insert(key, String::new());
                }
                _ => {
                    if !sections.is_empty() {
                        return Err(perr(line, format!("file header '{key}' after the first section")));
                    }
                    if key == "n" {
                        let v: usize = val.parse().map_err(|_| perr(line, "bad n"))?;
                        if !v.is_power_of_two() || v < 2 {
                            return Err(Error::SizeMismatch(format!("n = {v} is not a power of two >= 2")));
                        }
                        n = Some(v);
                    }
                    header.insert(key, (line, val));
                }
            }
            continue;
        }
        if !saw_tag {
            return Err(perr(line, format!("missing '# {FCF_TAG}' header")));
        }
        let s = sections
            .last_mut()
            .ok_or_else(|| perr(line, "coefficient line before any section"))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 4 && toks.len() != 6 {
            return Err(perr(
                line,
                format!(
                    "expected 'comp k re im' or 'comp k re_lo re_hi im_lo im_hi', got {} fields",
                    toks.len()
                ),
            ));
        }
        let comp: usize = toks[0].parse().map_err(|_| perr(line, "bad component index"))?;
        let k: i64 = toks[1].parse().map_err(|_| perr(line, "bad mode index"))?;
        let c = if toks.len() == 4 {
            ComplexInterval::point(parse_f64(toks[2], line)?, parse_f64(toks[3], line)?)
        } else {
            ComplexInterval::new(
                parse_interval(toks[2], toks[3], line)?,
                parse_interval(toks[4], toks[5], line)?,
            )
        };
        let n = n.ok_or_else(|| perr(line, "coefficients before '# n = ...'"))?;
        if comp >= s.components {
            return Err(Error::SizeMismatch(format!(
                "line {line}: component {comp} out of range for {} components",
                s.components
            )));
        }
        let is_diag = s.kind == "diagonal";
        let h = (n / 2) as i64;
        if is_diag && k != 0 || !is_diag && !(-h..h).contains(&k) {
            return Err(Error::SizeMismatch(format!(
                "line {line}: mode k = {k} outside I_N for N = {n}"
            )));
        }
        if s.body.len() <= comp {
            s.body.resize_with(comp + 1, || (0, Vec::new(), Vec::new()));
        }
        let len = if is_diag { 1 } else { n };
        let entry = &mut s.body[comp];
        if entry.1.is_empty() {
            *entry = (0, vec![ComplexInterval::ZERO; len], vec![false; len]);
        }
        let slot = if is_diag { 0 } else { (k + h) as usize };
        if entry.2[slot] {
            return Err(perr(
                line,
                format!("duplicate coefficient for component {comp}, k = {k}"),
            ));
        }
        entry.2[slot] = true;
        entry.1[slot] = c;
        entry.0 += 1;
    }
    if !saw_tag {
        return Err(perr(1, format!("missing '# {FCF_TAG}' header")));
    }
    let n = n.ok_or_else(|| perr(last_line, "missing '# n = ...'"))?;
    if let Some(s) = sections.last() {
        close_section(s, n, last_line + 1)?;
    }
    let get = |key: &str| -> Result<&(usize, String)> {
        header
            .get(key)
            .ok_or_else(|| perr(last_line, format!("missing header '{key}'")))
    };
    let model = get("model")?.1.clone();
    let (kl, kv) = get("kappa")?;
    let kappa = parse_f64(kv, *kl)?;
    let (el, ev) = get("eps_map")?;
    let eps_map = parse_f64(ev, *el)?;
    let (ol, ov) = get("omega")?;
    let omega = OmegaSpec::parse(ov).map_err(|_| perr(*ol, format!("bad omega '{ov}'")))?;

    let find = |name: &str| -> Result<&Section> {
        sections
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| perr(last_line, format!("missing section '{name}'")))
    };
    let series = |s: &Section| -> Result<Vec<FourierSeries>> {
        s.body
            .iter()
            .map(|(_, c, _)| Ok(FourierSeries::new(SpectralCoeffs::from_symmetric(c.clone())?, s.real)))
            .collect()
    };
    let k_sec = find("K0")?;
    let dim = k_sec.components;
    let expect_kind = |s: &Section, want: &str| -> Result<()> {
        if s.kind != want {
            return Err(perr(
                s.header_line,
                format!("section {} has kind '{}', expected '{want}'", s.name, s.kind),
            ));
        }
        Ok(())
    };
    expect_kind(k_sec, "torus")?;
    let k0 = FourierMatrix::column(series(k_sec)?)?;
    let mat_kind = format!("matrix {dim} {dim}");
    let mut mats = Vec::new();
    for name in ["P1", "P2"] {
        let s = find(name)?;
        expect_kind(s, &mat_kind)?;
        if s.components != dim * dim {
            return Err(Error::SizeMismatch(format!(
                "{name} has {} components, expected {}",
                s.components,
                dim * dim
            )));
        }
        mats.push(FourierMatrix::new(dim, dim, series(s)?)?);
    }
    let l_sec = find("Lambda")?;
    expect_kind(l_sec, "diagonal")?;
    if l_sec.components != dim {
        return Err(Error::SizeMismatch(format!(
            "Lambda has {} entries, expected {dim}",
            l_sec.components
        )));
    }
    let mut lambda = IMat::zeros(dim, dim);
    for (i, (_, c, _)) in l_sec.body.iter().enumerate() {
        lambda.set(i, i, c[0]);
    }
    let p2 = mats.pop().expect("two matrices");
    let p1 = mats.pop().expect("two matrices");
    Ok(CandidateFile {
        model,
        kappa,
        eps_map,
        omega,
        data: CandidateData::new(k0, p1, p2, lambda)?,
    })
}

/// Every section must hold exactly `components * n` lines (`components`
/// for the diagonal); `line` is where the section ended.
fn close_section(s: &Section, n: usize, line: usize) -> Result<()> {
    if s.kind.is_empty() || s.components == 0 {
        return Err(perr(
            s.header_line,
            format!("section {} needs kind and components", s.name),
        ));
    }
    let per = if s.kind == "diagonal" { 1 } else { n };
    for comp in 0..s.components {
        let got = s.body.get(comp).map_or(0, |e| e.0);
        if got != per {
            return Err(perr(
                line,
                format!(
                    "section {} component {comp}: {got} coefficient lines, expected {per}",
                    s.name
                ),
            ));
        }
    }
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), num)
}

/// Key-value report; every bound is an upper bound except `cn`, which is
/// printed as an enclosure. The verdict is the last line.
pub fn certificate_report(cert: &Certificate, file: &CandidateFile) -> String {
    let p = &cert.params;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("format", "fhit-certificate v1".into());
    kv("model", file.model.clone());
    kv("kappa", num(file.kappa));
    kv("eps_map", num(file.eps_map));
    kv("omega", file.omega.to_string());
    kv("n", cert.n.to_string());
    kv("rho", num(p.rho));
    kv("rho_hat", num(p.rho_hat));
    kv("radius", num(p.radius));
    kv("pad_to", p.pad_to.map_or("none".into(), |n| n.to_string()));
    kv("noise_floor", p.noise_floor.map_or("none".into(), num));
    kv(
        "cn",
        cert.cn
            .map_or("n/a".into(), |c| format!("[{}, {}]", num(c.lo()), num(c.hi()))),
    );
    kv("eps_inv_err", opt(cert.eps_inv_err));
    kv("eps_red", opt(cert.eps_red));
    kv("eps_invert", opt(cert.eps_invert));
    kv("lambda_s", opt(cert.lambda_s));
    kv("lambda_u", opt(cert.lambda_u));
    kv("lambda", opt(cert.lambda));
    kv("norm_p1_rho", opt(cert.norms.p1_rho));
    kv("norm_p2_rho", opt(cert.norms.p2_rho));
    kv("norm_p1_rho_hat", opt(cert.norms.p1_rho_hat));
    kv("norm_p2_rho_hat", opt(cert.norms.p2_rho_hat));
    kv("norm_m0_rho_hat", opt(cert.norms.m0_rho_hat));
    kv("norm_fk0_rho_hat", opt(cert.norms.fk0_rho_hat));
    kv("sigma", opt(cert.sigma));
    kv("b_of_r", opt(cert.b_of_r));
    kv("r_minus", opt(cert.r_minus));
    kv("r_plus", opt(cert.r_plus));
    if let crate::validator::Verdict::Failed { detail, .. } = &cert.verdict {
        kv("failure_detail", detail.replace('\n', " "));
    }
    kv("verdict", cert.verdict.to_string());
    out
}

/// Reads a report back into key-value pairs, in file order.
pub fn parse_report(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.split_once(" = ")
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| perr(i + 1, "expected 'key = value'"))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportKind {
    Coeffs,
    Grid,
    BundleAngle,
}

impl std::str::FromStr for ExportKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "coeffs" => Ok(ExportKind::Coeffs),
            "grid" => Ok(ExportKind::Grid),
            "bundle-angle" => Ok(ExportKind::BundleAngle),
            _ => Err(format!("unknown export '{s}' (coeffs, grid, bundle-angle)")),
        }
    }
}

/// Midpoints of the grid values of every entry of `m`.
fn grid_mids(m: &FourierMatrix) -> Result<Vec<Vec<f64>>> {
    m.entries()
        .iter()
        .map(|s| Ok(s.to_grid()?.values().iter().map(|z| z.re.mid()).collect()))
        .collect()
}

/// Angle of the line spanned by `(x, y)` with the positive x semiaxis, in
/// `(-pi/2, pi/2]`.
pub fn line_angle(x: f64, y: f64) -> f64 {
    let a = y.atan2(x);
    let h = std::f64::consts::FRAC_PI_2;
    if a > h {
        a - std::f64::consts::PI
    } else if a <= -h {
        a + std::f64::consts::PI
    } else {
        a
    }
}

/// TSV plot data with a header row.
pub fn export_tsv(data: &CandidateData, kind: ExportKind) -> Result<String> {
    let mut out = String::new();
    let n = data.n();
    match kind {
        ExportKind::Coeffs => {
            out.push_str("object\tcomponent\tk\tre\tim\tabs\n");
            for (name, m) in [("K0", &data.k0), ("P1", &data.p1), ("P2", &data.p2)] {
                for (comp, s) in m.entries().iter().enumerate() {
                    for (k, c) in s.coeffs().iter() {
                        let (re, im) = c.mid();
                        let _ = writeln!(
                            out,
                            "{name}\t{comp}\t{k}\t{}\t{}\t{}",
                            num(re),
                            num(im),
                            num(re.hypot(im))
                        );
                    }
                }
            }
        }
        ExportKind::Grid => {
            let d = data.dim();
            out.push_str("theta");
            for i in 0..d {
                let _ = write!(out, "\tK0_{i}");
            }
            for name in ["P1", "P2"] {
                for i in 0..d {
                    for j in 0..d {
                        let _ = write!(out, "\t{name}_{i}{j}");
                    }
                }
            }
            out.push('\n');
            let cols: Vec<Vec<f64>> = grid_mids(&data.k0)?
                .into_iter()
                .chain(grid_mids(&data.p1)?)
                .chain(grid_mids(&data.p2)?)
                .collect();
            for j in 0..n {
                let _ = write!(out, "{}", num(j as f64 / n as f64));
                for c in &cols {
                    let _ = write!(out, "\t{}", num(c[j]));
                }
                out.push('\n');
            }
        }
        ExportKind::BundleAngle => {
            if data.dim() != 2 {
                return Err(Error::DimensionMismatch("bundle angles need fiber dimension 2".into()));
            }
            out.push_str("theta\talpha_s\talpha_u\n");
            let p = grid_mids(&data.p1)?;
            for j in 0..n {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}",
                    num(j as f64 / n as f64),
                    num(line_angle(p[0][j], p[2][j])),
                    num(line_angle(p[1][j], p[3][j]))
                );
            }
        }
    }
    Ok(out)
}
