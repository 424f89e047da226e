//! Convergence-table rendering.

use fracoga::IterationRecord64;

pub const HEADER: &str = "N,loss,loss_order,l2,l2_order,h1,h1_order,linf,linf_order";

/// C-style `%.2e`: three significant digits, signed two-digit exponent.
pub fn sci3(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    let s = format!("{x:.2e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Orders as fixed two-decimal values.
pub fn order2(x: f64) -> String {
    format!("{x:.2}")
}

/// Shortest representation that parses back to the same `f64`.
pub fn full(x: f64) -> String {
    format!("{x:e}")
}

fn columns(r: &IterationRecord64, val: fn(f64) -> String, ord: fn(f64) -> String) -> [String; 9] {
    [
        r.n.to_string(),
        val(r.loss),
        ord(r.loss_order),
        val(r.l2),
        ord(r.l2_order),
        val(r.h1),
        ord(r.h1_order),
        val(r.linf),
        ord(r.linf_order),
    ]
}

pub fn to_csv(rows: &[IterationRecord64]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&columns(r, sci3, order2).join(","));
        out.push('\n');
    }
    out
}

/// Same columns as [`to_csv`] at full precision.
pub fn to_full_csv(rows: &[IterationRecord64]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&columns(r, full, full).join(","));
        out.push('\n');
    }
    out
}

pub fn to_markdown(rows: &[IterationRecord64]) -> String {
    let names: Vec<&str> = HEADER.split(',').collect();
    let mut out = format!("| {} |\n", names.join(" | "));
    out.push_str(&format!("|{}\n", "---|".repeat(names.len())));
    for r in rows {
        out.push_str(&format!("| {} |\n", columns(r, sci3, order2).join(" | ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, v: f64) -> IterationRecord64 {
        IterationRecord64 {
            n,
            loss: v,
            loss_order: 0.0,
            l2: v,
            l2_order: 0.905,
            h1: v,
            h1_order: -12.4,
            linf: v,
            linf_order: 0.0,
        }
    }

    #[test]
    fn scientific_formatting() {
        assert_eq!(sci3(2.28e-1), "2.28e-01");
        assert_eq!(sci3(8.9e33), "8.90e+33");
        assert_eq!(sci3(1.0), "1.00e+00");
        assert_eq!(sci3(0.0), "0.00e+00");
        assert_eq!(sci3(-4.5e-7), "-4.50e-07");
        assert_eq!(sci3(1.2e-100), "1.20e-100");
        assert_eq!(sci3(f64::NAN), "nan");
    }

    #[test]
    fn full_precision_round_trips() {
        for &x in &[0.1, 1.0 / 3.0, 2.228_394e-4, 8.9e33] {
            assert_eq!(full(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&[row(2, 0.5), row(4, 0.125)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], HEADER);
        assert_eq!(
            lines[1],
            "2,5.00e-01,0.00,5.00e-01,0.91,5.00e-01,-12.40,5.00e-01,0.00"
        );
        assert_eq!(lines.len(), 3);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn markdown_layout() {
        let md = to_markdown(&[row(2, 0.5)]);
        assert!(md.starts_with("| N | loss | loss_order |"));
        assert_eq!(md.lines().count(), 3);
    }
}
