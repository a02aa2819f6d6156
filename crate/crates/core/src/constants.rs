//! Numeric constants shared by every other module.
//!
//! Table entries are kept as the decimal strings they are printed as and
//! parsed once, both to `f64` and to an exact integer count of millionths.
//! The exact form is what the additivity checks and golden tests compare.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstantsError {
    #[error("face length {0} is below 3")]
    FaceLength(usize),
    #[error("index (n={n}, k={k}) is outside the table range")]
    OutOfRange { n: i64, k: i64 },
    #[error("no penalty menu for a {n}-gon with {flat} flat quarters")]
    NoPenalty { n: usize, flat: usize },
    #[error("malformed decimal literal `{0}`")]
    BadDecimal(String),
}

/// Scale of [`Dec::micros`].
pub const MICRO: i64 = 1_000_000;

/// A decimal table entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dec {
    pub text: &'static str,
    pub value: f64,
    /// The literal in units of 10^-6; every printed constant has at most six
    /// fractional digits.
    pub micros: i64,
}

impl Dec {
    pub fn new(text: &'static str) -> Dec {
        let micros = parse_micros(text).unwrap_or_else(|e| panic!("{e}"));
        let value = text.parse::<f64>().expect("decimal literal");
        Dec {
            text,
            value,
            micros,
        }
    }
}

/// Parses a plain decimal literal into millionths, exactly.
pub fn parse_micros(text: &str) -> Result<i64, ConstantsError> {
    let bad = || ConstantsError::BadDecimal(text.to_string());
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 6 {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let int: i64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let mut f = 0i64;
    for (i, c) in frac.chars().enumerate() {
        f += (c as i64 - '0' as i64) * 10i64.pow(5 - i as u32);
    }
    let v = int * MICRO + f;
    Ok(if neg { -v } else { v })
}

/// A penalty `xi_gamma_count * xi_gamma + xi_v_count * xi_v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Penalty {
    pub xi_gamma: u32,
    pub xi_v: u32,
}

impl Penalty {
    pub const ZERO: Penalty = Penalty {
        xi_gamma: 0,
        xi_v: 0,
    };

    pub fn value(&self, table: &ConstantTable) -> f64 {
        self.xi_gamma as f64 * table.xi_gamma.value + self.xi_v as f64 * table.xi_v.value
    }
}

#[derive(Debug, Clone)]
pub struct ConstantTable {
    pub t0: Dec,
    pub target: Dec,
    pub eps_z: Dec,
    pub xi_gamma: Dec,
    pub xi_gamma_prime: Dec,
    pub xi_v: Dec,
    pub angle_min_triangle: Dec,
    pub angle_min_nontriangle: Dec,
    pub flat_angle_threshold: Dec,
    pub upright_break: Dec,
    pub d_slope: Dec,
    pub s3_plus_penalty: Dec,
    pub b_table: BTreeMap<(u32, u32), Dec>,
    pub c_table: BTreeMap<usize, Dec>,
    pub d_table: BTreeMap<usize, Dec>,
    pub a_table: BTreeMap<u32, Dec>,
    pub t_n: BTreeMap<usize, Dec>,
    pub s_n: BTreeMap<usize, Dec>,
    pub delta_loop: BTreeMap<(u32, u32), Dec>,
    pub z_loop: BTreeMap<(u32, u32), Dec>,
    /// Branch break points, keyed by the role they play.
    pub branch_params: BTreeMap<&'static str, Dec>,

    pub delta_tet: f64,
    pub delta_oct: f64,
    pub pt: f64,
    pub zeta: f64,
    pub eight_pt: f64,
    pub squander_bound: f64,
    pub vertex_weight_55: Dec,
}

fn map<K: Ord + Copy>(entries: &[(K, &'static str)]) -> BTreeMap<K, Dec> {
    entries.iter().map(|&(k, s)| (k, Dec::new(s))).collect()
}

/// Recomputes the derived constants from their definitions and assembles the
/// printed tables.
pub fn derived_constants() -> ConstantTable {
    let atan_r = (2f64.sqrt() / 5.0).atan();
    let delta_tet = 8f64.sqrt() * atan_r;
    let pt = -PI / 3.0 + 2f64.sqrt() * delta_tet;
    let zeta = 1.0 / (2.0 * atan_r);
    let delta_oct = PI / 8f64.sqrt() - delta_tet / 2.0;

    ConstantTable {
        t0: Dec::new("1.255"),
        target: Dec::new("14.8"),
        eps_z: Dec::new("0.00005"),
        xi_gamma: Dec::new("0.01561"),
        xi_gamma_prime: Dec::new("0.00935"),
        xi_v: Dec::new("0.003521"),
        angle_min_triangle: Dec::new("0.8638"),
        angle_min_nontriangle: Dec::new("1.153"),
        flat_angle_threshold: Dec::new("1.32"),
        upright_break: Dec::new("2.696"),
        d_slope: Dec::new("0.06585"),
        s3_plus_penalty: Dec::new("0.008"),
        b_table: map(&[
            ((0, 3), "7.135"),
            ((0, 4), "10.649"),
            ((1, 2), "6.95"),
            ((1, 3), "7.135"),
            ((2, 1), "8.5"),
            ((2, 2), "4.756"),
            ((2, 3), "12.981"),
            ((3, 1), "3.642"),
            ((3, 2), "8.334"),
            ((4, 0), "4.139"),
            ((4, 1), "3.781"),
            ((5, 0), "0.55"),
            ((5, 1), "11.22"),
            ((6, 0), "6.339"),
        ]),
        c_table: map(&[(3, "1"), (4, "0"), (5, "-1.03"), (6, "-2.06")]),
        d_table: map(&[
            (3, "0"),
            (4, "2.378"),
            (5, "4.896"),
            (6, "7.414"),
            (7, "9.932"),
            (8, "10.916"),
        ]),
        a_table: map(&[(0, "14.8"), (1, "14.8"), (2, "14.8"), (3, "1.4"), (4, "1.5")]),
        t_n: map(&[
            (4, "0.1317"),
            (5, "0.27113"),
            (6, "0.41056"),
            (7, "0.54999"),
            (8, "0.6045"),
        ]),
        s_n: map(&[(5, "-0.05704"), (6, "-0.11408"), (7, "-0.17112"), (8, "-0.22816")]),
        delta_loop: map(&[
            ((4, 0), "0.0045"),
            ((4, 1), "0.00272"),
            ((4, 2), "0.12034"),
            ((4, 3), "0.29426"),
            ((5, 0), "0.09537"),
            ((5, 1), "0.24939"),
        ]),
        z_loop: map(&[((4, 2), "-0.08582")]),
        branch_params: [
            ("triangle-ysum", "6.25"),
            ("upright-height", "2.696"),
            ("anchor", "2.45"),
            ("central-height", "2.2"),
            ("flat-diagonal", "2.7"),
            ("type-a-edge", "2.77"),
            ("quad-diagonal", "3.0"),
        ]
        .into_iter()
        .map(|(k, v)| (k, Dec::new(v)))
        .collect(),
        delta_tet,
        delta_oct,
        pt,
        zeta,
        eight_pt: 8.0 * pt,
        squander_bound: 4.0 * PI * zeta - 8.0,
        vertex_weight_55: Dec::new("0.55"),
    }
}

static STANDARD: OnceLock<ConstantTable> = OnceLock::new();

/// The process-wide table.
pub fn constants() -> &'static ConstantTable {
    STANDARD.get_or_init(derived_constants)
}

impl ConstantTable {
    pub fn c_dec(&self, n: usize) -> Result<Dec, ConstantsError> {
        if n < 3 {
            return Err(ConstantsError::FaceLength(n));
        }
        Ok(self
            .c_table
            .get(&n)
            .copied()
            .unwrap_or_else(|| Dec::new("-3.03")))
    }

    pub fn c_of(&self, n: usize) -> Result<f64, ConstantsError> {
        self.c_dec(n).map(|d| d.value)
    }

    pub fn d_dec(&self, n: usize) -> Result<Dec, ConstantsError> {
        if n < 3 {
            return Err(ConstantsError::FaceLength(n));
        }
        Ok(self.d_table.get(&n).copied().unwrap_or(self.target))
    }

    pub fn d_of(&self, n: usize) -> Result<f64, ConstantsError> {
        self.d_dec(n).map(|d| d.value)
    }

    pub fn a_dec(&self, tri: u32) -> Dec {
        self.a_table
            .get(&tri)
            .copied()
            .unwrap_or_else(|| Dec::new("0"))
    }

    pub fn a_of(&self, tri: u32) -> f64 {
        self.a_dec(tri).value
    }

    pub fn b_dec(&self, p: u32, q: u32) -> Dec {
        self.b_table.get(&(p, q)).copied().unwrap_or(self.target)
    }

    pub fn b_of(&self, p: u32, q: u32) -> f64 {
        self.b_dec(p, q).value
    }

    /// Vertex types with `b(p, q) < 14.8`, in row-major table order.
    pub fn low_b_types(&self) -> Vec<(u32, u32)> {
        self.b_table
            .iter()
            .filter(|(_, d)| d.micros < self.target.micros)
            .map(|(&k, _)| k)
            .collect()
    }

    fn d_in_range(n: i64, k: i64) -> bool {
        k >= 0 && k <= n && (4..=8).contains(&(n + k))
    }

    fn z_in_range(n: i64, k: i64) -> bool {
        (n, k) == (3, 1) || (k >= 0 && k <= n && (5..=8).contains(&(n + k)))
    }

    /// `D(n,k) = t_{n+k} - 0.06585 k`, in millionths.
    pub fn big_d_micros(&self, n: i64, k: i64) -> Result<i64, ConstantsError> {
        if !Self::d_in_range(n, k) {
            return Err(ConstantsError::OutOfRange { n, k });
        }
        Ok(self.t_n[&((n + k) as usize)].micros - self.d_slope.micros * k)
    }

    pub fn big_d(&self, n: i64, k: i64) -> Result<f64, ConstantsError> {
        self.big_d_micros(n, k).map(|m| m as f64 / MICRO as f64)
    }

    /// `Z(n,k) = s_{n+k} - k eps`, with `Z(3,1) = eps`, in millionths.
    pub fn big_z_micros(&self, n: i64, k: i64) -> Result<i64, ConstantsError> {
        if !Self::z_in_range(n, k) {
            return Err(ConstantsError::OutOfRange { n, k });
        }
        if (n, k) == (3, 1) {
            return Ok(self.eps_z.micros);
        }
        Ok(self.s_n[&((n + k) as usize)].micros - self.eps_z.micros * k)
    }

    pub fn big_z(&self, n: i64, k: i64) -> Result<f64, ConstantsError> {
        self.big_z_micros(n, k).map(|m| m as f64 / MICRO as f64)
    }

    /// Pairs `((n1,k1),(n2,k2))` violating `D(n1,k1)+D(n2,k2) >= D(n1+n2-2,k1+k2-2)`.
    pub fn d_superadditivity_violations(&self) -> Vec<((i64, i64), (i64, i64))> {
        self.additivity_violations(Self::d_in_range, |a, b, c| a + b >= c, |n, k| {
            self.big_d_micros(n, k).unwrap()
        })
    }

    /// Pairs violating `Z(n1,k1)+Z(n2,k2) <= Z(n1+n2-2,k1+k2-2)`.
    pub fn z_subadditivity_violations(&self) -> Vec<((i64, i64), (i64, i64))> {
        self.additivity_violations(Self::z_in_range, |a, b, c| a + b <= c, |n, k| {
            self.big_z_micros(n, k).unwrap()
        })
    }

    fn additivity_violations(
        &self,
        in_range: fn(i64, i64) -> bool,
        holds: impl Fn(i64, i64, i64) -> bool,
        value: impl Fn(i64, i64) -> i64,
    ) -> Vec<((i64, i64), (i64, i64))> {
        let domain: Vec<(i64, i64)> = (0..=8)
            .flat_map(|n| (0..=8).map(move |k| (n, k)))
            .filter(|&(n, k)| in_range(n, k))
            .collect();
        let mut bad = Vec::new();
        for &(n1, k1) in &domain {
            for &(n2, k2) in &domain {
                let (n, k) = (n1 + n2 - 2, k1 + k2 - 2);
                if !in_range(n, k) {
                    continue;
                }
                if !holds(value(n1, k1), value(n2, k2), value(n, k)) {
                    bad.push(((n1, k1), (n2, k2)));
                }
            }
        }
        bad
    }

    /// Worst-case penalty for a refined heptagon or octagon with `flat`
    /// flat quarters. `loop_42` selects the heptagon menu used when an
    /// upright diagonal has context (4,2).
    pub fn penalty_menu(
        &self,
        n: usize,
        flat: usize,
        loop_42: bool,
    ) -> Result<Penalty, ConstantsError> {
        let p = |g, v| Penalty { xi_gamma: g, xi_v: v };
        let menu = match (n, loop_42, flat) {
            (8, false, 0 | 1) => p(6, 0),
            (8, false, 2) => p(4, 2),
            (8, false, 3) => p(2, 4),
            (8, false, 4) => p(0, 0),
            (7, false, 0) => p(6, 0),
            (7, false, 1) => p(4, 2),
            (7, false, 2) => p(3, 0),
            (7, false, 3) => p(1, 2),
            (7, true, 0 | 1) => p(5, 0),
            (7, true, 2) => p(3, 2),
            (7, true, 3) => p(1, 4),
            _ => return Err(ConstantsError::NoPenalty { n, flat }),
        };
        Ok(menu)
    }

    /// Looks up a named scalar. Used by the inequality files.
    pub fn named(&self, name: &str) -> Option<f64> {
        let v = match name {
            "pt" => self.pt,
            "zeta" => self.zeta,
            "pi" => PI,
            "t0" => self.t0.value,
            "2t0" => 2.0 * self.t0.value,
            "sqrt2" => 2f64.sqrt(),
            "sqrt8" => 8f64.sqrt(),
            "delta_tet" => self.delta_tet,
            "delta_oct" => self.delta_oct,
            "eight_pt" => self.eight_pt,
            "target" => self.target.value,
            "xi_gamma" => self.xi_gamma.value,
            "xi_gamma_prime" => self.xi_gamma_prime.value,
            "xi_v" => self.xi_v.value,
            "eps" => self.eps_z.value,
            _ => return None,
        };
        Some(v)
    }

    /// Flat `key=value` listing, sorted by key.
    pub fn dump(&self) -> String {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        let mut put = |k: String, v: String| {
            kv.insert(k, v);
        };
        for (name, d) in [
            ("t0", self.t0),
            ("target", self.target),
            ("eps_z", self.eps_z),
            ("xi_gamma", self.xi_gamma),
            ("xi_gamma_prime", self.xi_gamma_prime),
            ("xi_v", self.xi_v),
            ("angle_min_triangle", self.angle_min_triangle),
            ("angle_min_nontriangle", self.angle_min_nontriangle),
            ("flat_angle_threshold", self.flat_angle_threshold),
            ("upright_break", self.upright_break),
            ("d_slope", self.d_slope),
            ("s3_plus_penalty", self.s3_plus_penalty),
        ] {
            put(name.to_string(), d.text.to_string());
        }
        for ((p, q), d) in &self.b_table {
            put(format!("b.{p}.{q}"), d.text.to_string());
        }
        put("b.default".into(), self.target.text.into());
        for (n, d) in &self.c_table {
            put(format!("c.{n}"), d.text.to_string());
        }
        put("c.default".into(), "-3.03".into());
        for (n, d) in &self.d_table {
            put(format!("d.{n}"), d.text.to_string());
        }
        put("d.default".into(), self.target.text.into());
        for (n, d) in &self.a_table {
            put(format!("a.{n}"), d.text.to_string());
        }
        put("a.default".into(), "0".into());
        for (n, d) in &self.t_n {
            put(format!("t.{n}"), d.text.to_string());
        }
        for (n, d) in &self.s_n {
            put(format!("s.{n}"), d.text.to_string());
        }
        for ((n, k), d) in &self.delta_loop {
            put(format!("delta_loop.{n}.{k}"), d.text.to_string());
        }
        for ((n, k), d) in &self.z_loop {
            put(format!("z_loop.{n}.{k}"), d.text.to_string());
        }
        for n in 0..=8i64 {
            for k in 0..=8i64 {
                if let Ok(m) = self.big_d_micros(n, k) {
                    put(format!("D.{n}.{k}"), micros_text(m));
                }
                if let Ok(m) = self.big_z_micros(n, k) {
                    put(format!("Z.{n}.{k}"), micros_text(m));
                }
            }
        }
        for (k, d) in &self.branch_params {
            put(format!("branch.{k}"), d.text.to_string());
        }
        for (name, v) in [
            ("delta_tet", self.delta_tet),
            ("delta_oct", self.delta_oct),
            ("pt", self.pt),
            ("zeta", self.zeta),
            ("eight_pt", self.eight_pt),
            ("squander_bound", self.squander_bound),
        ] {
            put(name.to_string(), format!("{v}"));
        }
        let mut out = String::new();
        for (k, v) in kv {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }
}

/// Formats a count of millionths as the shortest decimal.
pub fn micros_text(m: i64) -> String {
    let sign = if m < 0 { "-" } else { "" };
    let a = m.unsigned_abs();
    let int = a / MICRO as u64;
    let frac = a % MICRO as u64;
    if frac == 0 {
        return format!("{sign}{int}");
    }
    let f = format!("{frac:06}");
    format!("{sign}{int}.{}", f.trim_end_matches('0'))
}
