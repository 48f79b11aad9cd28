use num_complex::Complex64;
use qphase::wigner::format_fixed;
use serde::Serialize;

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Header plus one row per record.
pub fn csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("serializable");
    }
    String::from_utf8(w.into_inner().expect("in-memory")).expect("utf-8")
}

pub fn real(x: f64, precision: usize) -> String {
    format_fixed(x, precision, 0)
}

/// `a+bi` with both parts at fixed precision.
pub fn complex(z: Complex64, precision: usize) -> String {
    let re = real(z.re, precision);
    let im = real(z.im.abs(), precision);
    let sign = if real(z.im, precision).starts_with('-') {
        '-'
    } else {
        '+'
    };
    format!("{re}{sign}{im}i")
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}
