//! Text form of an isomorphism certificate.
//!
//! ```text
//! index <k> <n> <d>
//! begin extension <k>
//! <extension file>
//! end
//! kappa <vertex of J1> <vertex of J2>
//! w <vertex of J1> <perm>
//! ```

use std::fmt::Write as _;

use super::cohomology::{verify_equivalence, Equivalence};
use crate::error::{Error, Result};
use crate::extension::{emit_gsp, parse_gsp, GspExtension};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCertificate {
    /// The two canonical extensions.
    pub extensions: [GspExtension; 2],
    /// `(n, d)`: the stringing order and index each was found at.
    pub index: [(usize, usize); 2],
    pub equivalence: Equivalence,
}

impl IsoCertificate {
    /// Re-checks `κ` as a letter-map conjugacy and `w` against the cocycle equation.
    pub fn verify(&self) -> bool {
        verify_equivalence(&self.extensions[0], &self.extensions[1], &self.equivalence)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# isomorphism certificate\n");
        for (k, (n, d)) in self.index.iter().enumerate() {
            let _ = writeln!(out, "index {} {n} {d}", k + 1);
        }
        for (k, e) in self.extensions.iter().enumerate() {
            let _ = writeln!(out, "begin extension {}", k + 1);
            out.push_str(&emit_gsp(e));
            out.push_str("end\n");
        }
        let (b1, b2) = (self.extensions[0].base(), self.extensions[1].base());
        for (j, &k) in self.equivalence.kappa.iter().enumerate() {
            let _ = writeln!(out, "kappa {} {}", b1.vertex_name(j), b2.vertex_name(k));
        }
        for (j, w) in self.equivalence.w.iter().enumerate() {
            let _ = writeln!(out, "w {} {}", b1.vertex_name(j), w);
        }
        out
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses [`IsoCertificate::to_text`] output; does not verify it.
pub fn parse_certificate(text: &str, budget: usize) -> Result<IsoCertificate> {
    let mut index = [None, None];
    let mut sections: [Option<(usize, String)>; 2] = [None, None];
    let mut kappa_lines = Vec::new();
    let mut w_lines = Vec::new();
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    while let Some((no, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let slot = |s: &str| -> Result<usize> {
            match s {
                "1" => Ok(0),
                "2" => Ok(1),
                _ => Err(err(no, format!("expected 1 or 2, found `{s}`"))),
            }
        };
        match fields[0] {
            "index" if fields.len() == 4 => {
                let k = slot(fields[1])?;
                let n = fields[2].parse().map_err(|_| err(no, "bad stringing order"))?;
                let d = fields[3].parse().map_err(|_| err(no, "bad index"))?;
                index[k] = Some((n, d));
            }
            "begin" if fields.len() == 3 && fields[1] == "extension" => {
                let k = slot(fields[2])?;
                let mut body = String::new();
                let mut closed = false;
                for (_, inner) in lines.by_ref() {
                    if inner.trim() == "end" {
                        closed = true;
                        break;
                    }
                    body.push_str(inner);
                    body.push('\n');
                }
                if !closed {
                    return Err(err(no, "unterminated extension section"));
                }
                sections[k] = Some((no, body));
            }
            "kappa" if fields.len() == 3 => kappa_lines.push((no, fields[1].to_string(), fields[2].to_string())),
            // the permutation itself contains spaces
            "w" if fields.len() >= 3 => w_lines.push((no, fields[1].to_string(), fields[2..].join(" "))),
            _ => return Err(err(no, format!("unrecognized line `{line}`"))),
        }
    }
    let mut extensions = Vec::with_capacity(2);
    for (k, s) in sections.into_iter().enumerate() {
        let (no, body) = s.ok_or_else(|| err(0, format!("missing extension {}", k + 1)))?;
        // report errors at the certificate line of the section's first line
        let e = parse_gsp(&body, budget).map_err(|e| match e {
            Error::Parse { line, message } => err(no + line, message),
            other => other,
        })?;
        extensions.push(e);
    }
    let extensions: [GspExtension; 2] = extensions.try_into().expect("two sections");
    let n = extensions[0].j_count();
    let (b1, b2) = (extensions[0].base(), extensions[1].base());
    let find = |names: &[String], name: &str, no: usize| {
        names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| err(no, format!("unknown vertex `{name}`")))
    };
    let mut kappa = vec![None; n];
    for (no, a, b) in kappa_lines {
        let j = find(b1.vertex_names(), &a, no)?;
        kappa[j] = Some(find(b2.vertex_names(), &b, no)?);
    }
    let mut w = vec![None; n];
    for (no, a, p) in w_lines {
        let j = find(b1.vertex_names(), &a, no)?;
        w[j] = Some(p.parse::<Permutation>().map_err(|e| err(no, e.to_string()))?);
    }
    let kappa = kappa
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| err(0, "kappa is not total"))?;
    let w = w
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| err(0, "w is not total"))?;
    Ok(IsoCertificate {
        index: [
            index[0].ok_or_else(|| err(0, "missing index 1"))?,
            index[1].ok_or_else(|| err(0, "missing index 2"))?,
        ],
        extensions,
        equivalence: Equivalence { kappa, w },
    })
}
