//! Constructors for h-nodes, SCP instances and the stability criterion.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{FragmentError, SyntaxError};
use crate::fragments::classify::{is_classical_palyutin, is_palyutin};
use crate::rational::Rational;
use crate::syntax::{formula_bounds, ClassicalFormula, Condition, Formula, Monotonicity, PLFunc, Signature, Term};

fn not_palyutin(what: &'static str, f: &Formula) -> FragmentError {
    FragmentError::NotInFragment {
        what,
        fragment: "palyutin",
        formula: f.to_string(),
    }
}

fn require_palyutin(what: &'static str, f: &Formula) -> Result<(), FragmentError> {
    if is_palyutin(f) {
        Ok(())
    } else {
        Err(not_palyutin(what, f))
    }
}

fn require_mono(c: &PLFunc, required: Monotonicity) -> Result<(), FragmentError> {
    let found = c.monotonicity();
    let ok = match required {
        Monotonicity::Nonincreasing => found.is_nonincreasing(),
        _ => found.is_nondecreasing(),
    };
    if ok {
        Ok(())
    } else {
        Err(SyntaxError::NotMonotone {
            connective: c.to_string(),
            required,
            found,
        }
        .into())
    }
}

/// `max(inf_x phi, sup_x min(D phi, delta, psi))` with `delta` the fixed
/// point of `d`.
pub fn mk_h_node(var: &str, d: PLFunc, phi: Formula, psi: Formula) -> Result<Formula, FragmentError> {
    require_mono(&d, Monotonicity::Nonincreasing)?;
    require_palyutin("phi", &phi)?;
    require_palyutin("psi", &psi)?;
    Ok(Formula::h(var, d, phi, psi)?)
}

/// Which monotonicity the SCP connectives must have.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScpMonotonicity {
    #[default]
    Nondecreasing,
    Nonincreasing,
}

impl From<ScpMonotonicity> for Monotonicity {
    fn from(m: ScpMonotonicity) -> Self {
        match m {
            ScpMonotonicity::Nondecreasing => Monotonicity::Nondecreasing,
            ScpMonotonicity::Nonincreasing => Monotonicity::Nonincreasing,
        }
    }
}

fn close_with<F: Fn(&str, Formula) -> Formula>(body: Formula, vars: BTreeSet<String>, q: F) -> Formula {
    vars.into_iter().rev().fold(body, |acc, v| q(&v, acc))
}

fn inf_over(xs: &[&str], body: Formula) -> Formula {
    xs.iter().rev().fold(body, |acc, x| Formula::inf(x, acc))
}

/// The condition
/// `sup_y (inf_x max(phi, D_1 psi_1, ..., D_n psi_n) - max_j inf_x max(phi, D_j psi_j)) <= 0`,
/// where `y` lists the free variables outside `xs`.
pub fn mk_scp_instance(
    phi: &Formula,
    psis: &[Formula],
    ds: &[PLFunc],
    xs: &[&str],
    mono: ScpMonotonicity,
) -> Result<Condition, FragmentError> {
    if psis.len() < 2 {
        return Err(FragmentError::TooFewDisjuncts {
            min: 2,
            found: psis.len(),
        });
    }
    if ds.len() != psis.len() {
        return Err(FragmentError::ConnectiveCount {
            connectives: ds.len(),
            formulas: psis.len(),
        });
    }
    require_palyutin("phi", phi)?;
    for psi in psis {
        require_palyutin("psi", psi)?;
    }
    for d in ds {
        require_mono(d, mono.into())?;
    }
    let guarded: Vec<Formula> = ds
        .iter()
        .zip(psis)
        .map(|(d, psi)| Formula::unary(d.clone(), psi.clone()))
        .collect();
    let mut all = vec![phi.clone()];
    all.extend(guarded.iter().cloned());
    let lhs = inf_over(xs, Formula::Max(all));
    let rhs = Formula::max_of(
        guarded
            .into_iter()
            .map(|g| inf_over(xs, Formula::Max(vec![phi.clone(), g])))
            .collect(),
    );
    let mut ys = lhs.free_vars();
    ys.extend(rhs.free_vars());
    let sentence = close_with(Formula::difference(lhs, rhs), ys, Formula::sup);
    Ok(Condition::new(sentence, Rational::ZERO).expect("closed by construction"))
}

/// `forall y ((forall x (phi -> psi_1 | ... | psi_n)) -> (forall x (phi -> psi_1)) | ... )`
/// with `y` the free variables outside `xs`.
pub fn mk_scp_instance_classical(
    phi: &ClassicalFormula,
    psis: &[ClassicalFormula],
    xs: &[&str],
) -> Result<ClassicalFormula, FragmentError> {
    if psis.is_empty() {
        return Err(FragmentError::TooFewDisjuncts { min: 1, found: 0 });
    }
    for (what, f) in std::iter::once(("phi", phi)).chain(psis.iter().map(|p| ("psi", p))) {
        if !is_classical_palyutin(f) {
            return Err(FragmentError::NotInFragment {
                what,
                fragment: "classical-palyutin",
                formula: f.to_string(),
            });
        }
    }
    let forall_x = |body: ClassicalFormula| xs.iter().rev().fold(body, |acc, x| ClassicalFormula::forall(x, acc));
    let premise = forall_x(ClassicalFormula::implies(phi.clone(), ClassicalFormula::disj(psis.to_vec())));
    let conclusion = ClassicalFormula::disj(
        psis.iter()
            .map(|psi| forall_x(ClassicalFormula::implies(phi.clone(), psi.clone())))
            .collect(),
    );
    let body = ClassicalFormula::implies(premise, conclusion);
    let ys = body.free_vars();
    Ok(ys.into_iter().rev().fold(body, |acc, y| ClassicalFormula::forall(&y, acc)))
}

/// `sup_y sup_z (sup_x |phi(x,y) - phi(x,z)| - inf_x max(phi(x,y), phi(x,z))) <= 0`.
pub fn stability_criterion(
    phi: &Formula,
    sig: &Signature,
    x: &str,
    y: &str,
    z: &str,
) -> Result<Condition, FragmentError> {
    require_palyutin("phi", phi)?;
    let (lo, _) = formula_bounds(phi, sig)?;
    if lo.is_negative() {
        return Err(FragmentError::PossiblyNegative(lo));
    }
    if phi.all_vars().contains(z) {
        return Err(FragmentError::VariableClash(z.to_string()));
    }
    let phi_y = phi.clone();
    let phi_z = phi.substitute(y, &Term::var(z));
    let gap = Formula::Max(vec![
        Formula::difference(phi_y.clone(), phi_z.clone()),
        Formula::difference(phi_z.clone(), phi_y.clone()),
    ]);
    let body = Formula::difference(Formula::sup(x, gap), Formula::inf(x, Formula::Max(vec![phi_y, phi_z])));
    let mut outer = body.free_vars();
    outer.remove(y);
    outer.remove(z);
    let closed = Formula::sup(y, Formula::sup(z, body));
    let sentence = close_with(closed, outer, Formula::sup);
    Ok(Condition::new(sentence, Rational::ZERO).expect("closed by construction"))
}
