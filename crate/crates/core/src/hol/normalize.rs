use super::HolTerm;

/// Beta-normal, eta-contracted form. Terminates on simply-typed input.
pub fn beta_eta_normalize(t: &HolTerm) -> HolTerm {
    match t {
        HolTerm::Const(_) | HolTerm::Var(_) | HolTerm::True | HolTerm::False => t.clone(),
        HolTerm::App(f, a) => apply(beta_eta_normalize(f), beta_eta_normalize(a)),
        HolTerm::Lam(x, ty, b) => {
            let b = beta_eta_normalize(b);
            if let HolTerm::App(g, arg) = &b {
                if matches!(&**arg, HolTerm::Var(y) if y == x) && !g.occurs_free(x) {
                    return (**g).clone();
                }
            }
            HolTerm::lam(x.clone(), ty.clone(), b)
        }
        HolTerm::Forall(x, ty, b) => HolTerm::forall(x.clone(), ty.clone(), beta_eta_normalize(b)),
        HolTerm::Exists(x, ty, b) => HolTerm::exists(x.clone(), ty.clone(), beta_eta_normalize(b)),
        HolTerm::Eq(ty, s, u) => {
            HolTerm::eq(ty.clone(), beta_eta_normalize(s), beta_eta_normalize(u))
        }
        HolTerm::Impl(p, q) => HolTerm::implies(beta_eta_normalize(p), beta_eta_normalize(q)),
        HolTerm::And(p, q) => HolTerm::and(beta_eta_normalize(p), beta_eta_normalize(q)),
        HolTerm::Or(p, q) => HolTerm::or(beta_eta_normalize(p), beta_eta_normalize(q)),
        HolTerm::Not(p) => HolTerm::not(beta_eta_normalize(p)),
    }
}

// Both arguments are already normal.
fn apply(f: HolTerm, a: HolTerm) -> HolTerm {
    match f {
        HolTerm::Lam(x, _, body) => beta_eta_normalize(&body.subst(&x, &a)),
        f => HolTerm::app(f, a),
    }
}
