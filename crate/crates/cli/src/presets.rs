//! Named presentations, usable on the command line as `@name`.

use crate::io::parse_presentation;
use qls_core::products::{unit, UnitKind};
use qls_core::twist::{frt_algebra, r_algebra, r_matrix};
use qls_core::{Error, FieldSpec, Presentation, Result};

pub const NAMES: &[&str] = &["plane", "sym2", "ext2", "free2", "cubic", "k", "u", "u3", "mq2", "ar"];

const TEXTS: &[(&str, &str)] = &[
    ("plane", "field q\nspace Aq\ngens x y\nrel x*y - q*y*x\n"),
    ("sym2", "space S\ngens x y\nrel x*y - y*x\n"),
    ("ext2", "space L\ngens x y\nrel x*x\nrel y*y\nrel x*y + y*x\n"),
    ("free2", "space F\ngens x y\n"),
    ("cubic", "space C3\ngens x y\nrel x*x*y - y*x*x\nrel x*y*y - y*y*x\n"),
];

pub fn preset(name: &str, cap: usize) -> Result<Presentation> {
    if let Some((_, text)) = TEXTS.iter().find(|(n, _)| *n == name) {
        return parse_presentation(text, cap);
    }
    let q_field = || FieldSpec::new(&["q"]);
    match name {
        "k" => unit(UnitKind::K, cap),
        "u" => unit(UnitKind::U(2), cap),
        "u3" => unit(UnitKind::U(3), cap),
        "mq2" => {
            let f = q_field()?;
            frt_algebra(&f, &r_matrix(&f.param("q")?)?, cap.max(2))
        }
        "ar" => {
            let f = q_field()?;
            r_algebra("A_R", &f, &r_matrix(&f.param("q")?)?, cap.max(2))
        }
        _ => Err(Error::Precondition(format!("unknown preset `{name}`; known: {}", NAMES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_builds() {
        for n in NAMES {
            let p = preset(n, 3).unwrap();
            assert!(p.hilbert(2).is_ok(), "{n}");
        }
    }

    #[test]
    fn plane_hilbert() {
        let p = preset("plane", 4).unwrap();
        assert_eq!(p.hilbert_series().unwrap(), vec![1, 2, 3, 4, 5]);
    }
}
