use std::fmt::Write;

use super::PolarSpace;
use crate::field::Field;

impl PolarSpace {
    /// Plain-text dump of the geometry: header, form rows, points in
    /// canonical order and lines as sorted index tuples. Byte-identical for
    /// a fixed form.
    pub fn export(&self) -> String {
        let f = self.field();
        let mut out = String::new();
        let _ = writeln!(out, "polar-space v1");
        let _ = writeln!(out, "field {f}");
        let _ = writeln!(out, "dim {}", self.dim());
        let _ = writeln!(out, "form");
        for row in self.form().coeffs() {
            let cells: Vec<String> = row.iter().map(|x| f.format_elem(x)).collect();
            let _ = writeln!(out, "  {}", cells.join(","));
        }
        let g = self.gaps();
        let _ = writeln!(out, "gaps n={} e={} p={} r={}", g.n, g.e, g.p, g.r);
        let _ = writeln!(out, "points {}", self.num_points());
        for p in self.points() {
            let cells: Vec<String> = p.coords.iter().map(|x| f.format_elem(x)).collect();
            let _ = writeln!(out, "  {} {}", p.index, cells.join(","));
        }
        let _ = writeln!(out, "lines {}", self.lines().len());
        for line in self.lines() {
            let cells: Vec<String> = line.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
        out
    }
}
