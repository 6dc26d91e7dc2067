//! Canonical text form of a model document.
//!
//! Sections appear in a fixed order, names are single-space separated,
//! reals use 17 significant digits, and the text ends with a newline, so
//! semantically equal documents serialize to identical bytes.

use std::fmt::Write;

use subentity_core::hilbert::C64;
use subentity_core::lecce::LabWorld;

use crate::model::{
    Body, CompoundSpec, HilbertSpec, LatticeSpec, ModelDocument, NamedMatrix, SpsSpec,
};

/// `{:.16e}` keeps every bit of an `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_complex(z: C64) -> String {
    let im = format_real(z.im);
    if im.starts_with('-') {
        format!("{}{im}i", format_real(z.re))
    } else {
        format!("{}+{im}i", format_real(z.re))
    }
}

pub fn serialize_model(doc: &ModelDocument) -> String {
    let mut out = String::new();
    out.push_str("[model]\n");
    let _ = writeln!(out, "kind = {}", doc.kind());
    if !doc.meta.name.is_empty() {
        let _ = writeln!(out, "name = {}", doc.meta.name);
    }
    if !doc.meta.description.is_empty() {
        let _ = writeln!(out, "description = {}", doc.meta.description);
    }
    match &doc.body {
        Body::Lattice(l) => write_lattice(&mut out, l),
        Body::Sps(s) => write_sps(&mut out, s),
        Body::Hilbert(h) => write_hilbert(&mut out, h),
        Body::LabWorld(w) => write_world(&mut out, w),
        Body::Compound(c) => write_compound(&mut out, c),
    }
    out
}

fn write_lattice(out: &mut String, l: &LatticeSpec) {
    let _ = write!(out, "\n[lattice]\nelements = {}\n", l.elements.join(" "));
    if !l.order.is_empty() {
        out.push_str("\n[order]\n");
        for (a, b) in &l.order {
            let _ = writeln!(out, "{a} < {b}");
        }
    }
}

fn write_sps(out: &mut String, s: &SpsSpec) {
    write_lattice(out, &s.lattice);
    let _ = write!(
        out,
        "\n[states]\nnames = {}\n\n[actuality]\n",
        s.states.join(" ")
    );
    for (p, actual) in s.states.iter().zip(&s.actual) {
        if actual.is_empty() {
            let _ = writeln!(out, "{p} =");
        } else {
            let _ = writeln!(out, "{p} = {}", actual.join(" "));
        }
    }
}

fn write_matrix(out: &mut String, m: &NamedMatrix) {
    let _ = write!(
        out,
        "\n[matrix {} {}x{}]\nrole = {}\n",
        m.name,
        m.matrix.rows(),
        m.matrix.cols(),
        m.role.name()
    );
    for i in 0..m.matrix.rows() {
        let row: Vec<String> = m.matrix.row(i).iter().map(|&z| format_complex(z)).collect();
        let _ = writeln!(out, "{}", row.join(", "));
    }
}

fn dims_line(dims: &[usize]) -> String {
    dims.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_hilbert(out: &mut String, h: &HilbertSpec) {
    let _ = write!(out, "\n[hilbert]\ndims = {}\n", dims_line(&h.dims));
    h.matrices.iter().for_each(|m| write_matrix(out, m));
}

fn write_compound(out: &mut String, c: &CompoundSpec) {
    let _ = write!(
        out,
        "\n[compound]\ndims = {} {}\nwhole = {}\n",
        c.dims.0,
        c.dims.1,
        c.whole.join(" ")
    );
    let _ = writeln!(out, "part_properties = {}", c.part_properties.join(" "));
    if let Some(states) = &c.part_states {
        let _ = writeln!(out, "part_states = {}", states.join(" "));
    }
    if !c.includes.is_empty() {
        out.push_str("\n[include]\n");
        for (k, path) in &c.includes {
            let _ = writeln!(out, "{k} = {path}");
        }
    }
    c.matrices.iter().for_each(|m| write_matrix(out, m));
}

fn write_world(out: &mut String, w: &LabWorld) {
    let ideal: Vec<&str> = w
        .registers
        .iter()
        .zip(&w.ideal)
        .filter(|(_, &i)| i)
        .map(|(r, _)| r.as_str())
        .collect();
    let _ = write!(
        out,
        "\n[devices]\npreparing = {}\nregistering = {}\nideal = {}\n",
        w.preparers.join(" "),
        w.registers.join(" "),
        ideal.join(" ")
    );
    for lab in &w.labs {
        let _ = write!(out, "\n[lab {}]\n", lab.id);
        for o in &lab.objects {
            let prep = o.preparer.map_or("-", |p| w.preparers[p].as_str());
            let _ = write!(out, "{} {prep}", o.name);
            for (r, &yes) in w.registers.iter().zip(&o.outcomes) {
                let _ = write!(out, " {r}={}", if yes { "yes" } else { "no" });
            }
            out.push('\n');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_model;

    #[test]
    fn reals_round_trip_exactly() {
        for x in [
            1.0 / 3.0,
            -0.0,
            1e-300,
            f64::MAX,
            f64::MIN_POSITIVE,
            0.1 + 0.2,
        ] {
            let back: f64 = format_real(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
        assert_eq!(
            format_complex(C64::new(0.5, -0.25)),
            "5.0000000000000000e-1-2.5000000000000000e-1i"
        );
    }

    #[test]
    fn third_survives_reparse() {
        let text = "[model]\nkind = hilbert\n[hilbert]\ndims = 1\n[matrix m 1x1]\n0.333333333333333314829616256247\n";
        let doc = parse_model(text.as_bytes()).unwrap();
        let again = parse_model(serialize_model(&doc).as_bytes()).unwrap();
        assert_eq!(doc, again);
        let Body::Hilbert(h) = again.body else {
            unreachable!()
        };
        assert_eq!(h.matrices[0].matrix[(0, 0)].re, 1.0 / 3.0);
    }

    #[test]
    fn whitespace_variants_share_canonical_bytes() {
        let a = "[model]\nkind = lattice\n[lattice]\nelements = 0 1\n[order]\n0 < 1\n";
        let b = "# two-element chain\n\n[model]\n  kind=lattice  \n\n[lattice]\nelements =   0    1\n[order]\n   0<1\n";
        let sa = serialize_model(&parse_model(a.as_bytes()).unwrap());
        let sb = serialize_model(&parse_model(b.as_bytes()).unwrap());
        assert_eq!(sa, sb);
        assert!(sa.ends_with('\n'));
    }
}
