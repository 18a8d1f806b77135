//! Serializable records for every result the CLI prints.
//!
//! Numbers are carried as decimal strings at full working precision. Plain
//! text is rendered from the record alone, so a record parsed back from
//! JSON renders the same plain text byte for byte.

use std::fmt::Write as _;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::binet::{BinetForm, RatioReport, Solver, VerifyReport};
use crate::charpoly::SquarefreeCertificate;
use crate::error::{Error, Result};
use crate::numeric::{abs, format_complex, format_float, parse_complex, parse_float, parse_integer};
use crate::roots::{AlphaGrid, ComplexRootSet, LimitReport, RealRoot};
use crate::sequences::{InitialConditions, SequenceKind, SequenceParams, SequenceWindow};

/// Output format selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

/// A record printable in every [`Format`].
pub trait Render: Serialize {
    fn plain(&self) -> String;

    fn csv(&self) -> Result<String>;

    fn json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Error::Parse(e.to_string()))
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Plain => Ok(self.plain()),
            Format::Json => self.json(),
            Format::Csv => self.csv(),
        }
    }
}

fn write_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn check_bits(precision_bits: u32) -> Result<u32> {
    crate::roots::check_precision(precision_bits)?;
    Ok(precision_bits)
}

// ---- sequences ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRecord {
    #[serde(flatten)]
    pub kind: SequenceKind,
    pub start_index: u64,
    pub terms: Vec<String>,
}

impl From<&SequenceWindow> for SequenceRecord {
    fn from(w: &SequenceWindow) -> Self {
        SequenceRecord {
            kind: w.kind,
            start_index: w.start_index,
            terms: w.terms.iter().map(|t| t.to_string()).collect(),
        }
    }
}

impl TryFrom<&SequenceRecord> for SequenceWindow {
    type Error = Error;

    fn try_from(r: &SequenceRecord) -> Result<Self> {
        Ok(SequenceWindow {
            kind: r.kind,
            start_index: r.start_index,
            terms: r.terms.iter().map(|t| parse_integer(t)).collect::<Result<_>>()?,
        })
    }
}

#[derive(Serialize)]
struct TermRow<'a> {
    n: u64,
    term: &'a str,
}

impl Render for SequenceRecord {
    fn plain(&self) -> String {
        format!("{}\n", self.terms.join(","))
    }

    fn csv(&self) -> Result<String> {
        write_csv(self.terms.iter().enumerate().map(|(i, t)| TermRow {
            n: self.start_index + i as u64,
            term: t,
        }))
    }
}

// ---- dominant root ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealRootRecord {
    pub k: u32,
    pub h: u32,
    pub alpha: String,
    pub lo: String,
    pub hi: String,
    pub residual: String,
    pub precision_bits: u32,
}

impl RealRootRecord {
    pub fn new(params: SequenceParams, root: &RealRoot) -> Self {
        let bits = root.precision_bits;
        RealRootRecord {
            k: params.k(),
            h: params.h(),
            alpha: format_float(&root.value, bits),
            lo: format_float(&root.lo, bits),
            hi: format_float(&root.hi, bits),
            residual: format_float(&root.residual, bits),
            precision_bits: bits,
        }
    }
}

impl TryFrom<&RealRootRecord> for RealRoot {
    type Error = Error;

    fn try_from(r: &RealRootRecord) -> Result<Self> {
        let bits = check_bits(r.precision_bits)?;
        Ok(RealRoot {
            value: parse_float(&r.alpha, bits)?,
            lo: parse_float(&r.lo, bits)?,
            hi: parse_float(&r.hi, bits)?,
            residual: parse_float(&r.residual, bits)?,
            precision_bits: bits,
        })
    }
}

#[derive(Serialize)]
struct AlphaRow<'a> {
    k: u32,
    h: u32,
    alpha: &'a str,
    residual: &'a str,
}

impl Render for RealRootRecord {
    fn plain(&self) -> String {
        format!(
            "{}\nk={} h={} bracket=[{}, {}] residual={} precision_bits={}\n",
            self.alpha, self.k, self.h, self.lo, self.hi, self.residual, self.precision_bits
        )
    }

    fn csv(&self) -> Result<String> {
        write_csv([AlphaRow {
            k: self.k,
            h: self.h,
            alpha: &self.alpha,
            residual: &self.residual,
        }])
    }
}

// ---- full spectrum ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootRecord {
    pub re: String,
    pub im: String,
    pub modulus: String,
    pub residual: String,
    /// 1-based index of the conjugate root; equal to its own index when real.
    pub conjugate: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSetRecord {
    pub k: u32,
    pub h: u32,
    pub precision_bits: u32,
    pub max_residual: String,
    pub roots: Vec<RootRecord>,
}

impl From<&ComplexRootSet> for RootSetRecord {
    fn from(set: &ComplexRootSet) -> Self {
        let bits = set.precision_bits;
        let g = crate::charpoly::build_g(set.params);
        let roots = set
            .roots
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let (re, im) = format_complex(z, bits);
                let residual = abs(&g.eval_complex(&rug::Complex::with_val(2 * bits, z)));
                RootRecord {
                    re,
                    im,
                    modulus: format_float(&abs(z), bits),
                    residual: format_float(&Float::with_val(bits, residual), bits),
                    conjugate: set.conjugate_of(i).unwrap_or(i) + 1,
                }
            })
            .collect();
        RootSetRecord {
            k: set.params.k(),
            h: set.params.h(),
            precision_bits: bits,
            max_residual: format_float(&set.max_residual, bits),
            roots,
        }
    }
}

impl TryFrom<&RootSetRecord> for ComplexRootSet {
    type Error = Error;

    fn try_from(r: &RootSetRecord) -> Result<Self> {
        let bits = check_bits(r.precision_bits)?;
        let params = SequenceParams::new(r.k, r.h)?;
        if r.roots.len() != params.order() {
            return Err(Error::Parse(format!(
                "expected {} roots, found {}",
                params.order(),
                r.roots.len()
            )));
        }
        Ok(ComplexRootSet {
            params,
            roots: r
                .roots
                .iter()
                .map(|z| parse_complex(&z.re, &z.im, bits))
                .collect::<Result<_>>()?,
            precision_bits: bits,
            max_residual: parse_float(&r.max_residual, bits)?,
        })
    }
}

#[derive(Serialize)]
struct SpectrumRow<'a> {
    k: u32,
    h: u32,
    index: usize,
    re: &'a str,
    im: &'a str,
    modulus: &'a str,
    residual: &'a str,
}

impl Render for RootSetRecord {
    fn plain(&self) -> String {
        let mut out = format!(
            "g_{{{},{}}}: {} roots, precision_bits={} max_residual={}\n",
            self.k,
            self.h,
            self.roots.len(),
            self.precision_bits,
            self.max_residual
        );
        for (i, r) in self.roots.iter().enumerate() {
            let tag = if i == 0 {
                "dominant".to_string()
            } else if r.conjugate == i + 1 {
                "real".to_string()
            } else {
                format!("conjugate of r{}", r.conjugate)
            };
            let _ = writeln!(
                out,
                "r{} = {} {} {}i  |r|={}  residual={}  [{}]",
                i + 1,
                r.re,
                if r.im.starts_with('-') { "-" } else { "+" },
                r.im.trim_start_matches('-'),
                r.modulus,
                r.residual,
                tag
            );
        }
        out
    }

    fn csv(&self) -> Result<String> {
        write_csv(self.roots.iter().enumerate().map(|(i, r)| SpectrumRow {
            k: self.k,
            h: self.h,
            index: i + 1,
            re: &r.re,
            im: &r.im,
            modulus: &r.modulus,
            residual: &r.residual,
        }))
    }
}

// ---- grid ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCellRecord {
    pub k: u32,
    pub h: u32,
    pub alpha: String,
    pub residual: String,
    pub increasing_in_k: bool,
    pub decreasing_in_h: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowLimitRecord {
    pub h: u32,
    pub alpha_h: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridRecord {
    pub kmax: u32,
    pub hmax: u32,
    pub precision_bits: u32,
    pub all_flags_true: bool,
    pub cells: Vec<GridCellRecord>,
    pub row_limits: Vec<RowLimitRecord>,
}

impl From<&AlphaGrid> for GridRecord {
    fn from(grid: &AlphaGrid) -> Self {
        let bits = grid.alpha[0][0].precision_bits;
        let mut cells = Vec::new();
        for k in 1..=grid.kmax {
            for h in 1..=grid.hmax {
                let root = grid.get(k, h);
                let flags = grid.flags[(k - 1) as usize][(h - 1) as usize];
                cells.push(GridCellRecord {
                    k,
                    h,
                    alpha: format_float(&root.value, bits),
                    residual: format_float(&root.residual, bits),
                    increasing_in_k: flags.increasing_in_k,
                    decreasing_in_h: flags.decreasing_in_h,
                });
            }
        }
        GridRecord {
            kmax: grid.kmax,
            hmax: grid.hmax,
            precision_bits: bits,
            all_flags_true: grid.all_flags_true(),
            cells,
            row_limits: grid
                .row_limits
                .iter()
                .enumerate()
                .map(|(i, r)| RowLimitRecord {
                    h: i as u32 + 1,
                    alpha_h: format_float(&r.value, bits),
                })
                .collect(),
        }
    }
}

impl Render for GridRecord {
    fn plain(&self) -> String {
        let mut out = format!(
            "alpha_{{k,h}} for k<={} h<={} precision_bits={}\n",
            self.kmax, self.hmax, self.precision_bits
        );
        for c in &self.cells {
            let _ = writeln!(
                out,
                "k={} h={} alpha={} increasing_in_k={} decreasing_in_h={}",
                c.k, c.h, c.alpha, c.increasing_in_k, c.decreasing_in_h
            );
        }
        for r in &self.row_limits {
            let _ = writeln!(out, "h={} alpha_h={}", r.h, r.alpha_h);
        }
        let _ = writeln!(out, "all_flags_true={}", self.all_flags_true);
        out
    }

    fn csv(&self) -> Result<String> {
        write_csv(self.cells.iter().map(|c| AlphaRow {
            k: c.k,
            h: c.h,
            alpha: &c.alpha,
            residual: &c.residual,
        }))
    }
}

// ---- limits ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitEntryRecord {
    pub k: u32,
    pub h: u32,
    /// `|alpha_{k,h} - alpha_h|`.
    pub row_gap: String,
    /// `alpha_{k,h} - 1`.
    pub column_gap: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheckRecord {
    pub h: u32,
    pub alpha_h: String,
    pub strictly_decreasing: bool,
    pub below_target: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnCheckRecord {
    pub k: u32,
    pub strictly_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitRecord {
    pub kmax: u32,
    pub hmax: u32,
    pub precision_bits: u32,
    pub target_gap: String,
    pub all_ok: bool,
    pub targets_met: bool,
    pub entries: Vec<LimitEntryRecord>,
    pub rows: Vec<RowCheckRecord>,
    pub columns: Vec<ColumnCheckRecord>,
}

impl From<&LimitReport> for LimitRecord {
    fn from(rep: &LimitReport) -> Self {
        let bits = rep.precision_bits;
        let mut entries = Vec::new();
        for k in 1..=rep.kmax {
            for h in 1..=rep.hmax {
                entries.push(LimitEntryRecord {
                    k,
                    h,
                    row_gap: format_float(&rep.rows[(h - 1) as usize].gaps[(k - 1) as usize], bits),
                    column_gap: format_float(&rep.columns[(k - 1) as usize].gaps[(h - 1) as usize], bits),
                });
            }
        }
        LimitRecord {
            kmax: rep.kmax,
            hmax: rep.hmax,
            precision_bits: bits,
            target_gap: format_float(&rep.target_gap, 53),
            all_ok: rep.all_ok(),
            targets_met: rep.targets_met(),
            entries,
            rows: rep
                .rows
                .iter()
                .map(|r| RowCheckRecord {
                    h: r.h,
                    alpha_h: format_float(&r.limit, bits),
                    strictly_decreasing: r.strictly_decreasing,
                    below_target: r.below_target,
                })
                .collect(),
            columns: rep
                .columns
                .iter()
                .map(|c| ColumnCheckRecord {
                    k: c.k,
                    strictly_decreasing: c.strictly_decreasing,
                })
                .collect(),
        }
    }
}

impl Render for LimitRecord {
    fn plain(&self) -> String {
        let mut out = format!(
            "limit gaps for k<={} h<={} precision_bits={} target_gap={}\n",
            self.kmax, self.hmax, self.precision_bits, self.target_gap
        );
        for e in &self.entries {
            let _ = writeln!(
                out,
                "k={} h={} row_gap={} column_gap={}",
                e.k, e.h, e.row_gap, e.column_gap
            );
        }
        for r in &self.rows {
            let _ = writeln!(
                out,
                "row h={} alpha_h={} strictly_decreasing={} below_target={}",
                r.h, r.alpha_h, r.strictly_decreasing, r.below_target
            );
        }
        for c in &self.columns {
            let _ = writeln!(out, "column k={} strictly_decreasing={}", c.k, c.strictly_decreasing);
        }
        let _ = writeln!(out, "all_ok={} targets_met={}", self.all_ok, self.targets_met);
        out
    }

    fn csv(&self) -> Result<String> {
        write_csv(&self.entries)
    }
}

// ---- closed forms ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinetFormRecord {
    pub k: u32,
    pub h: u32,
    pub solver: Solver,
    pub precision_bits: u32,
    pub init: Vec<String>,
    /// `(re, im)` pairs, dominant root first.
    pub roots: Vec<(String, String)>,
    /// `(re, im)` pairs aligned with `roots`.
    pub coeffs: Vec<(String, String)>,
    pub max_root_residual: String,
    pub system_residual: String,
}

impl From<&BinetForm> for BinetFormRecord {
    fn from(form: &BinetForm) -> Self {
        let bits = form.precision_bits;
        BinetFormRecord {
            k: form.params.k(),
            h: form.params.h(),
            solver: form.solver,
            precision_bits: bits,
            init: form.init.values().iter().map(|v| v.to_string()).collect(),
            roots: form.roots.roots.iter().map(|z| format_complex(z, bits)).collect(),
            coeffs: form.coeffs.iter().map(|z| format_complex(z, bits)).collect(),
            max_root_residual: format_float(&form.roots.max_residual, bits),
            system_residual: format_float(&form.system_residual, bits),
        }
    }
}

impl TryFrom<&BinetFormRecord> for BinetForm {
    type Error = Error;

    fn try_from(r: &BinetFormRecord) -> Result<Self> {
        let bits = check_bits(r.precision_bits)?;
        let params = SequenceParams::new(r.k, r.h)?;
        let parse_pairs = |pairs: &[(String, String)]| -> Result<Vec<rug::Complex>> {
            if pairs.len() != params.order() {
                return Err(Error::Parse(format!(
                    "expected {} values, found {}",
                    params.order(),
                    pairs.len()
                )));
            }
            pairs.iter().map(|(re, im)| parse_complex(re, im, bits)).collect()
        };
        let init = InitialConditions::new(r.init.iter().map(|v| parse_integer(v)).collect::<Result<_>>()?);
        init.check_order(params)?;
        Ok(BinetForm {
            params,
            roots: ComplexRootSet {
                params,
                roots: parse_pairs(&r.roots)?,
                precision_bits: bits,
                max_residual: parse_float(&r.max_root_residual, bits)?,
            },
            coeffs: parse_pairs(&r.coeffs)?,
            solver: r.solver,
            precision_bits: bits,
            init,
            system_residual: parse_float(&r.system_residual, bits)?,
        })
    }
}

#[derive(Serialize)]
struct CoefficientRow<'a> {
    k: u32,
    h: u32,
    index: usize,
    root_re: &'a str,
    root_im: &'a str,
    coeff_re: &'a str,
    coeff_im: &'a str,
}

impl Render for BinetFormRecord {
    fn plain(&self) -> String {
        let mut out = format!(
            "C_n^({},{}) = sum a_i r_i^n  solver={} precision_bits={} init={} system_residual={}\n",
            self.k,
            self.h,
            self.solver.as_str(),
            self.precision_bits,
            self.init.join(","),
            self.system_residual
        );
        for (i, (r, a)) in self.roots.iter().zip(&self.coeffs).enumerate() {
            let _ = writeln!(out, "r{0} = ({1}, {2})  a{0} = ({3}, {4})", i + 1, r.0, r.1, a.0, a.1);
        }
        out
    }

    fn csv(&self) -> Result<String> {
        write_csv(
            self.roots
                .iter()
                .zip(&self.coeffs)
                .enumerate()
                .map(|(i, (r, a))| CoefficientRow {
                    k: self.k,
                    h: self.h,
                    index: i + 1,
                    root_re: &r.0,
                    root_im: &r.1,
                    coeff_re: &a.0,
                    coeff_im: &a.1,
                }),
        )
    }
}

// ---- verification ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchRecord {
    pub n: u64,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub k: u32,
    pub h: u32,
    pub n_max: u64,
    pub solver: Solver,
    pub precision_bits: u32,
    pub escalations: u32,
    pub max_residual: String,
    pub passed: bool,
    pub mismatches: Vec<MismatchRecord>,
}

impl From<&VerifyReport> for VerifyRecord {
    fn from(rep: &VerifyReport) -> Self {
        VerifyRecord {
            k: rep.params.k(),
            h: rep.params.h(),
            n_max: rep.n_max,
            solver: rep.solver,
            precision_bits: rep.precision_bits,
            escalations: rep.escalations,
            max_residual: format_float(&rep.max_residual, 53),
            passed: rep.passed(),
            mismatches: rep
                .mismatches
                .iter()
                .map(|m| MismatchRecord {
                    n: m.n,
                    expected: m.expected.to_string(),
                    got: m.got.to_string(),
                })
                .collect(),
        }
    }
}

impl Render for VerifyRecord {
    fn plain(&self) -> String {
        let mut out = format!(
            "verify k={} h={} n<={} solver={} precision_bits={} escalations={} max_residual={} mismatches={}\n",
            self.k,
            self.h,
            self.n_max,
            self.solver.as_str(),
            self.precision_bits,
            self.escalations,
            self.max_residual,
            self.mismatches.len()
        );
        for m in &self.mismatches {
            let _ = writeln!(out, "mismatch n={} expected={} got={}", m.n, m.expected, m.got);
        }
        let _ = writeln!(out, "{}", if self.passed { "PASS" } else { "FAIL" });
        out
    }

    fn csv(&self) -> Result<String> {
        write_csv(&self.mismatches)
    }
}

// ---- ratio and squarefree ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub k: u32,
    pub h: u32,
    pub n: u64,
    pub ratio: String,
    pub alpha: String,
    pub gap: String,
}

impl RatioRecord {
    pub fn new(rep: &RatioReport, bits: u32) -> Self {
        RatioRecord {
            k: rep.params.k(),
            h: rep.params.h(),
            n: rep.n,
            ratio: format_float(&rep.ratio, bits),
            alpha: format_float(&rep.alpha, bits),
            gap: format_float(&rep.gap, bits),
        }
    }
}

impl Render for RatioRecord {
    fn plain(&self) -> String {
        format!(
            "C_{}/C_{} = {}\nalpha = {}\ngap = {}\n",
            self.n + 1,
            self.n,
            self.ratio,
            self.alpha,
            self.gap
        )
    }

    fn csv(&self) -> Result<String> {
        write_csv([self])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeRecord {
    pub k: u32,
    pub h: u32,
    pub polynomial: crate::charpoly::IntPolynomial,
    #[serde(flatten)]
    pub certificate: SquarefreeCertificate,
}

impl Render for SquarefreeRecord {
    fn plain(&self) -> String {
        format!(
            "g_{{{},{}}} = {}\ngcd(g, g') = {}\nsquarefree={}\n",
            self.k, self.h, self.polynomial, self.certificate.gcd, self.certificate.squarefree
        )
    }

    fn csv(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Row<'a> {
            k: u32,
            h: u32,
            squarefree: bool,
            gcd: &'a str,
        }
        write_csv([Row {
            k: self.k,
            h: self.h,
            squarefree: self.certificate.squarefree,
            gcd: &self.certificate.gcd.to_string(),
        }])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binet::{binet_form, closed_form_eval, ratio_limit, verify};
    use crate::charpoly::{build_g, squarefree_check};
    use crate::roots::{all_roots, alpha_grid, dominant_root, limit_checks, DEFAULT_TARGET_GAP};
    use crate::sequences::dying_rabbit_seq;
    use serde::de::DeserializeOwned;

    fn params(k: u32, h: u32) -> SequenceParams {
        SequenceParams::new(k, h).unwrap()
    }

    fn round_trips<R: Render + DeserializeOwned + PartialEq + std::fmt::Debug>(record: &R) {
        let json = record.json().unwrap();
        let back: R = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, record);
        assert_eq!(back.plain(), record.plain());
    }

    #[test]
    fn sequence_plain_and_csv() {
        let rec = SequenceRecord::from(&dying_rabbit_seq(params(3, 2), 10).unwrap());
        assert_eq!(rec.plain(), "1,1,2,3,4,6,9,13,19,28,41\n");
        let csv = rec.csv().unwrap();
        assert!(csv.starts_with("n,term\n0,1\n"));
        assert!(csv.ends_with("10,41\n"));
        round_trips(&rec);
        let json = rec.json().unwrap();
        assert!(json.contains(r#""kind": "dying-rabbit""#));
        let window = SequenceWindow::try_from(&rec).unwrap();
        assert_eq!(window, dying_rabbit_seq(params(3, 2), 10).unwrap());
    }

    #[test]
    fn every_record_round_trips() {
        let p = params(3, 2);
        round_trips(&RealRootRecord::new(p, &dominant_root(p, 128).unwrap()));
        round_trips(&RootSetRecord::from(&all_roots(p, 128).unwrap()));
        round_trips(&GridRecord::from(&alpha_grid(3, 3, 128).unwrap()));
        round_trips(&LimitRecord::from(
            &limit_checks(3, 3, 128, DEFAULT_TARGET_GAP).unwrap(),
        ));
        round_trips(&BinetFormRecord::from(&binet_form(p, None, 128).unwrap()));
        round_trips(&VerifyRecord::from(&verify(p, None, 50, 128, 1024).unwrap()));
        round_trips(&RatioRecord::new(&ratio_limit(p, 50, 128).unwrap(), 128));
        let g = build_g(p);
        round_trips(&SquarefreeRecord {
            k: 3,
            h: 2,
            certificate: squarefree_check(&g).unwrap(),
            polynomial: g,
        });
    }

    #[test]
    fn real_root_values_survive_json() {
        let p = params(2, 2);
        let root = dominant_root(p, 200).unwrap();
        let rec = RealRootRecord::new(p, &root);
        let back = RealRoot::try_from(&rec).unwrap();
        assert_eq!(back.precision_bits, 200);
        assert!(Float::with_val(200, &back.value - &root.value).abs() < crate::numeric::pow2(200, -190));
        assert!(rec
            .plain()
            .starts_with("1.324717957244746025960908854478097340734404056901733364534015\n"));
    }

    #[test]
    fn exact_root_prints_as_integer() {
        let p = params(1, 4);
        let rec = RealRootRecord::new(p, &dominant_root(p, 128).unwrap());
        assert!(rec.plain().starts_with("1\n"));
    }

    #[test]
    fn binet_form_json_is_usable() {
        let p = params(7, 4);
        let form = binet_form(p, None, 192).unwrap();
        let json = BinetFormRecord::from(&form).json().unwrap();
        let rec: BinetFormRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(rec.solver, Solver::ExplicitFormula);
        let back = BinetForm::try_from(&rec).unwrap();
        assert_eq!(closed_form_eval(&back, 13).unwrap().rounded, 32);
        assert_eq!(back.roots.len(), 10);

        let mut broken = rec.clone();
        broken.coeffs.pop();
        assert!(BinetForm::try_from(&broken).is_err());
        let mut broken = rec;
        broken.precision_bits = 1;
        assert!(BinetForm::try_from(&broken).is_err());
    }

    #[test]
    fn spectrum_plain_lists_conjugates() {
        let rec = RootSetRecord::from(&all_roots(params(2, 2), 128).unwrap());
        let text = rec.plain();
        assert!(text.contains("3 roots"));
        assert!(text.contains("[dominant]"));
        assert!(text.contains("[conjugate of r3]"));
        assert!(text.contains("[conjugate of r2]"));
        let back = ComplexRootSet::try_from(&rec).unwrap();
        assert_eq!(back.len(), 3);
    }

    #[test]
    fn grid_csv_columns() {
        let rec = GridRecord::from(&alpha_grid(2, 2, 64).unwrap());
        let csv = rec.csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,h,alpha,residual"));
        assert_eq!(lines.next(), Some("1,1,1,0"));
        assert_eq!(csv.lines().count(), 5);
    }
}
