//! Aggregated per-group reports in text and JSON form.

use std::fmt::Write as _;

use serde::Serialize;

use crate::calabi::TorusActionCertificate;
use crate::crystal::ValidationReport;
use crate::hcc::{HccVerdict, SplittingSubgroup};
use crate::topology::{BettiVector, HomologyH1};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub h1: HomologyH1,
    pub betti: BettiVector,
    pub center_rank: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullReport {
    pub group_name: String,
    pub dim: usize,
    pub validation: ValidationReport,
    pub invariants: Option<Invariants>,
    pub certificate: Option<TorusActionCertificate>,
    pub hcc: Option<HccVerdict>,
    pub splitting_subgroup: Option<SplittingSubgroup>,
    pub errors: Vec<String>,
}

impl FullReport {
    pub fn invalid(name: &str, dim: usize, validation: ValidationReport) -> Self {
        FullReport {
            group_name: name.to_string(),
            dim,
            validation,
            invariants: None,
            certificate: None,
            hcc: None,
            splitting_subgroup: None,
            errors: Vec::new(),
        }
    }

    pub fn k(&self) -> Option<usize> {
        self.invariants.as_ref().map(|i| i.k)
    }

    pub fn passed(&self) -> bool {
        let Some(inv) = &self.invariants else {
            return false;
        };
        let torus_ok = if inv.k == 0 {
            true
        } else {
            self.certificate.as_ref().is_some_and(TorusActionCertificate::passed)
                && self.splitting_subgroup.as_ref().is_some_and(|s| s.verified_direct_product)
        };
        self.validation.passed()
            && self.errors.is_empty()
            && self.hcc.as_ref().is_some_and(HccVerdict::passed)
            && torus_ok
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "== {} (dim {}) ==", self.group_name, self.dim).unwrap();
        writeln!(w, "validation").unwrap();
        write!(w, "{}", self.validation).unwrap();
        if let Some(inv) = &self.invariants {
            writeln!(w, "H_1          {}", inv.h1).unwrap();
            writeln!(w, "betti        {}", inv.betti).unwrap();
            writeln!(w, "center rank  {}", inv.center_rank).unwrap();
            writeln!(w, "k            {}", inv.k).unwrap();
        }
        match &self.certificate {
            Some(c) => write_certificate(w, c),
            None if self.k() == Some(0) => {
                writeln!(w, "certificate  none (k = 0)").unwrap();
            }
            None => {}
        }
        if let Some(h) = &self.hcc {
            write_hcc(w, h);
        }
        if let Some(s) = &self.splitting_subgroup {
            writeln!(
                w,
                "splitting subgroup  index {}, {} generators, direct product {}",
                s.index,
                s.generators.len(),
                if s.verified_direct_product { "verified" } else { "NOT verified" }
            )
            .unwrap();
        }
        for e in &self.errors {
            writeln!(w, "error: {e}").unwrap();
        }
        writeln!(w, "result       {}", if self.passed() { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

pub fn write_certificate(w: &mut String, c: &TorusActionCertificate) {
    let rows = |rows: &[Vec<num_bigint::BigInt>]| {
        let parts: Vec<String> = rows.iter().map(|r| fmt_list(r)).collect();
        format!("[{}]", parts.join(", "))
    };
    writeln!(w, "certificate").unwrap();
    writeln!(w, "  kernel basis      {}", rows(c.splitting.kernel_basis.vectors())).unwrap();
    writeln!(w, "  complement basis  {}", rows(c.splitting.complement_basis.vectors())).unwrap();
    writeln!(w, "  image index       {}", c.splitting.image_index).unwrap();
    for (name, v) in c.lambda_values() {
        writeln!(w, "  lambda({name}){:pad$}{}", "", fmt_list(&v), pad = 10usize.saturating_sub(name.len()))
            .unwrap();
    }
    writeln!(w, "  ell               {}", c.ell()).unwrap();
    for (x, img) in c.tilde_b.lattice.iter().zip(&c.tilde_b.images) {
        writeln!(w, "  tilde_B           {} -> {}", fmt_list(x), fmt_list(img.translation())).unwrap();
    }
    for check in &c.checks {
        write!(w, "  {:<24}{}", check.name, if check.passed { "pass" } else { "FAIL" }).unwrap();
        if let Some(wit) = &check.witness {
            write!(w, "  ({wit})").unwrap();
        }
        writeln!(w).unwrap();
    }
}

pub fn write_hcc(w: &mut String, h: &HccVerdict) {
    writeln!(w, "hcc").unwrap();
    for d in &h.per_degree {
        writeln!(
            w,
            "  C({},{}) = {:<4} <= b_{} = {:<4} {}",
            h.k,
            d.j,
            d.binom,
            d.j,
            d.betti,
            if d.pass { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    let s = &h.sum_bound;
    writeln!(w, "  2^k = {} <= sum b_j = {}  {}", s.two_k, s.betti_sum, if s.pass { "pass" } else { "FAIL" })
        .unwrap();
    writeln!(w, "  homologically injective  {}", h.homologically_injective.as_str()).unwrap();
    writeln!(w, "  maximal                  {}", h.maximal.as_str()).unwrap();
}

fn fmt_list<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

impl Serialize for FullReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let inv = self.invariants.as_ref();
        let mut st = s.serialize_struct("FullReport", 12)?;
        st.serialize_field("group_name", &self.group_name)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("validation", &self.validation.checks)?;
        st.serialize_field("h1", &inv.map(|i| &i.h1))?;
        st.serialize_field("betti", &inv.map(|i| &i.betti))?;
        st.serialize_field("center_rank", &inv.map(|i| i.center_rank))?;
        st.serialize_field("k", &inv.map(|i| i.k))?;
        st.serialize_field("certificate", &self.certificate)?;
        st.serialize_field("hcc", &self.hcc)?;
        st.serialize_field("splitting_subgroup", &self.splitting_subgroup)?;
        st.serialize_field("errors", &self.errors)?;
        st.serialize_field("passed", &self.passed())?;
        st.end()
    }
}
