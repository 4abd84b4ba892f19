use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde_json::{json, Value};

use super::{fj_bound, nat_json, BoundQuery};
use crate::error::BoundError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    Quadric,
    Cubic,
    Quartic,
}

impl TableKind {
    pub fn form_degree(self) -> u32 {
        match self {
            TableKind::Quadric => 2,
            TableKind::Cubic => 3,
            TableKind::Quartic => 4,
        }
    }

    fn column(self) -> &'static str {
        match self {
            TableKind::Quadric => "m2",
            TableKind::Cubic => "m3",
            TableKind::Quartic => "m4",
        }
    }

    fn query(self, j: u64, m: u64) -> BoundQuery {
        match self {
            TableKind::Quadric => BoundQuery::new(j, m, 0, 0),
            TableKind::Cubic => BoundQuery::new(j, 0, m, 0),
            TableKind::Quartic => BoundQuery::new(j, 0, 0, m),
        }
    }
}

impl FromStr for TableKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quadric" => Ok(TableKind::Quadric),
            "cubic" => Ok(TableKind::Cubic),
            "quartic" => Ok(TableKind::Quartic),
            _ => Err(format!("unknown table kind {s:?} (quadric|cubic|quartic)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
    Json,
}

impl FromStr for TableFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "markdown" | "md" => Ok(TableFormat::Markdown),
            "json" => Ok(TableFormat::Json),
            _ => Err(format!("unknown table format {s:?} (csv|markdown|json)")),
        }
    }
}

// Published tables of f_j for m forms of a single degree; rows m = 1..=8,
// columns j = 0..=8.
const QUADRICS: [[u64; 9]; 8] = [
    [1, 3, 5, 7, 9, 11, 13, 15, 17],
    [2, 5, 8, 11, 14, 17, 20, 23, 26],
    [5, 9, 13, 17, 21, 25, 29, 33, 37],
    [8, 13, 18, 23, 28, 33, 38, 43, 48],
    [13, 19, 25, 31, 37, 43, 49, 55, 61],
    [18, 25, 32, 39, 46, 53, 60, 67, 74],
    [25, 33, 41, 49, 57, 65, 73, 81, 89],
    [32, 41, 50, 59, 68, 77, 86, 95, 104],
];

const CUBICS: [[u64; 9]; 8] = [
    [1, 5, 10, 18, 27, 39, 52, 68, 85],
    [5, 16, 33, 56, 85, 120, 161, 208, 261],
    [16, 42, 81, 131, 194, 268, 355, 453, 564],
    [42, 95, 168, 261, 374, 507, 660, 833, 1026],
    [95, 189, 312, 466, 649, 863, 1106, 1380, 1683],
    [189, 340, 533, 768, 1045, 1364, 1725, 2128, 2573],
    [340, 568, 853, 1193, 1590, 2042, 2551, 3115, 3736],
    [568, 897, 1298, 1771, 2316, 2933, 3622, 4383, 5216],
];

const QUARTICS: [[u64; 9]; 8] = [
    [1, 10, 44, 133, 319, 656, 1210, 2059, 3293],
    [10, 114, 502, 1476, 3442, 6918, 12526, 21000, 33178],
    [114, 858, 3180, 8460, 18510, 35574, 62328, 101880, 157770],
    [858, 4463, 14028, 33933, 69758, 128283, 217488, 346553, 525858],
    [4463, 17714, 48650, 108401, 210797, 372368, 612344, 952655, 1417931],
    [17714, 57680, 142062, 295218, 546802, 931756, 1490318, 2268014, 3315666],
    [57680, 161736, 364492, 713828, 1267032, 2090800, 3261236, 4863852, 6993568],
    [161736, 403665, 845322, 1573467, 2690412, 4314021, 6577710, 9630447, 13636752],
];

/// Reference values: `golden_table(kind)[m - 1][j]`.
pub fn golden_table(kind: TableKind) -> &'static [[u64; 9]; 8] {
    match kind {
        TableKind::Quadric => &QUADRICS,
        TableKind::Cubic => &CUBICS,
        TableKind::Quartic => &QUARTICS,
    }
}

/// Closed-form bounds for `m = 1..=m_max` forms of one degree, `j = 0..=j_max`,
/// with the degree of the intersection in the second column.
pub fn emit_table(
    kind: TableKind,
    j_max: u64,
    m_max: u64,
    format: TableFormat,
) -> Result<String, BoundError> {
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let degree = BigUint::from(kind.form_degree()).pow(m as u32);
        let values = (0..=j_max)
            .map(|j| fj_bound(kind.query(j, m)).map(|r| r.value))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((m, degree, values));
    }
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            let mut header = vec![kind.column().to_string(), "degree".into()];
            header.extend((0..=j_max).map(|j| format!("j{j}")));
            let _ = writeln!(out, "{}", header.join(","));
            for (m, d, vals) in &rows {
                let cells: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{m},{d},{}", cells.join(","));
            }
        }
        TableFormat::Markdown => {
            let mut header = format!("| {} | degree |", kind.column());
            let mut rule = String::from("|---:|---:|");
            for j in 0..=j_max {
                let _ = write!(header, " j={j} |");
                rule.push_str("---:|");
            }
            let _ = writeln!(out, "{header}\n{rule}");
            for (m, d, vals) in &rows {
                let _ = write!(out, "| {m} | {d} |");
                for v in vals {
                    let _ = write!(out, " {v} |");
                }
                out.push('\n');
            }
        }
        TableFormat::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|(m, d, vals)| {
                    json!({
                        "m": m,
                        "degree": nat_json(d),
                        "values": vals.iter().map(nat_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let v = json!({
                "kind": kind.column(),
                "j_max": j_max,
                "m_max": m_max,
                "rows": body,
            });
            out = serde_json::to_string_pretty(&v).expect("serializable");
            out.push('\n');
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub degree: u32,
    pub m: u64,
    /// `(2 m^2)^(2^(d-2))`.
    pub wooley: BigUint,
    /// `ceil((m+1)^(2^(d-1)) / 2^(2^(d-1) - 1))`.
    pub corollary: BigUint,
    /// Closed-form bound for points on `m` forms of degree `d`.
    pub ours: BigUint,
}

impl Comparison {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "m": self.m,
            "wooley": nat_json(&self.wooley),
            "corollary": nat_json(&self.corollary),
            "ours": nat_json(&self.ours),
        })
    }
}

pub fn comparison_bounds(degree: u32, m: u64) -> Result<Comparison, BoundError> {
    if !(2..=4).contains(&degree) {
        return Err(BoundError::BadDegree(degree));
    }
    if m == 0 {
        return Err(BoundError::ZeroCount);
    }
    let mb = BigUint::from(m);
    let wooley = (BigUint::from(2u32) * &mb * &mb).pow(1u32 << (degree - 2));
    let e = 1u32 << (degree - 1);
    let num = (&mb + BigUint::one()).pow(e);
    let den = BigUint::from(2u32).pow(e - 1);
    let corollary = num.div_ceil(&den);
    let kind = match degree {
        2 => TableKind::Quadric,
        3 => TableKind::Cubic,
        _ => TableKind::Quartic,
    };
    let ours = fj_bound(kind.query(0, m))?.value;
    Ok(Comparison {
        degree,
        m,
        wooley,
        corollary,
        ours,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emitted_cells() {
        let md = emit_table(TableKind::Quadric, 8, 8, TableFormat::Markdown).unwrap();
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines.len(), 10);
        let row3: Vec<&str> = lines[4].split('|').map(str::trim).collect();
        assert_eq!(row3[1], "3");
        assert_eq!(row3[2], "8");
        assert_eq!(row3[5], "13");

        let csv = emit_table(TableKind::Cubic, 8, 8, TableFormat::Csv).unwrap();
        let row5: Vec<&str> = csv.lines().nth(5).unwrap().split(',').collect();
        assert_eq!(row5[0], "5");
        assert_eq!(row5[1], "243");
        assert_eq!(row5[2 + 4], "649");

        let js = emit_table(TableKind::Quartic, 0, 1, TableFormat::Json).unwrap();
        let v: Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 1);
        assert_eq!(v["rows"][0]["degree"], 4);
        assert_eq!(v["rows"][0]["values"], json!([1]));
    }

    #[test]
    fn comparisons() {
        let c = comparison_bounds(3, 3).unwrap();
        assert_eq!(c.corollary, 32u32.into());
        assert_eq!(c.ours, 16u32.into());
        let c = comparison_bounds(4, 1).unwrap();
        assert_eq!(c.wooley, 16u32.into());
        assert_eq!(c.ours, 1u32.into());
        for m in 1..20u64 {
            assert_eq!(comparison_bounds(2, m).unwrap().wooley, BigUint::from(2 * m * m));
        }
        assert_eq!(comparison_bounds(5, 1), Err(BoundError::BadDegree(5)));
        assert_eq!(comparison_bounds(2, 0), Err(BoundError::ZeroCount));
    }
}
