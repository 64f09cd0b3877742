//! Algebraic identities every distribution must satisfy. Each check returns
//! a description of the first violation instead of panicking so the same
//! code can drive property tests and the acceptance report.

use multinfo_core::{measures, pid, DiscreteDistribution, IndexSet, SourceTargetSplit};

pub const TOL: f64 = 1e-10;

fn close(what: &str, a: f64, b: f64) -> Result<(), String> {
    if (a - b).abs() <= TOL {
        Ok(())
    } else {
        Err(format!("{what}: {a} vs {b} (|diff| = {:e})", (a - b).abs()))
    }
}

fn s(members: &[usize]) -> IndexSet {
    IndexSet::new(members.iter().copied())
}

/// Direct KL form `Σ p(a,b) log p(a,b) / (p(a) p(b))`.
fn mi_kl(d: &DiscreteDistribution, a: &IndexSet, b: &IndexSet) -> f64 {
    let ab = a.union(b);
    let joint = d.marginalize(&ab).unwrap();
    let pa = d.marginalize(a).unwrap();
    let pb = d.marginalize(b).unwrap();
    let pos = |set: &IndexSet, state: &[u32]| -> Vec<u32> {
        set.members()
            .iter()
            .map(|v| state[ab.members().iter().position(|m| m == v).unwrap()])
            .collect()
    };
    joint
        .iter()
        .map(|(st, p)| p * (p / (pa.prob(&pos(a, st)) * pb.prob(&pos(b, st)))).log2())
        .sum()
}

/// `I(a;b) = H(a) − H(a|b) = H(b) − H(b|a) = H(a) + H(b) − H(a,b)`, plus
/// the KL form, against the library value.
pub fn mutual_information_forms(d: &DiscreteDistribution, a: &IndexSet, b: &IndexSet) -> Result<(), String> {
    let mi = measures::mutual_information(d, a, b).unwrap();
    let h = |x: &IndexSet| measures::entropy(d, x).unwrap();
    let hc = |x: &IndexSet, y: &IndexSet| measures::conditional_entropy(d, x, y).unwrap();
    close("H(a) - H(a|b)", mi, h(a) - hc(a, b))?;
    close("H(b) - H(b|a)", mi, h(b) - hc(b, a))?;
    close("H(a) + H(b) - H(ab)", mi, h(a) + h(b) - h(&a.union(b)))?;
    close("KL form", mi, mi_kl(d, a, b))?;
    close("symmetry", mi, measures::mutual_information(d, b, a).unwrap())
}

/// Signed subset expansion `−Σ_T (−1)^{|S|−|T|} H(T)` evaluated here.
fn ii_expansion(d: &DiscreteDistribution, vars: &IndexSet) -> f64 {
    let n = vars.len();
    let mut acc = 0.0;
    for mask in 0..1u64 << n {
        let t = vars.select(mask);
        let sign = if (n - t.len()).is_multiple_of(2) { 1.0 } else { -1.0 };
        let h = if t.is_empty() { 0.0 } else { measures::entropy(d, &t).unwrap() };
        acc -= sign * h;
    }
    acc
}

/// Three conditioning orders and the entropy expansion for `II(X;Y;Z)`.
pub fn interaction_information_forms(d: &DiscreteDistribution, x: usize, y: usize, z: usize) -> Result<(), String> {
    let (sx, sy, sz) = (s(&[x]), s(&[y]), s(&[z]));
    let ii = measures::interaction_information(d, &s(&[x, y, z])).unwrap();
    let cmi = |a: &IndexSet, b: &IndexSet, c: &IndexSet| measures::conditional_mutual_information(d, a, b, c).unwrap();
    let mi = |a: &IndexSet, b: &IndexSet| measures::mutual_information(d, a, b).unwrap();
    close("I(X;Y|Z) - I(X;Y)", ii, cmi(&sx, &sy, &sz) - mi(&sx, &sy))?;
    close("I(X;Z|Y) - I(X;Z)", ii, cmi(&sx, &sz, &sy) - mi(&sx, &sz))?;
    close("I(Z;Y|X) - I(Z;Y)", ii, cmi(&sz, &sy, &sx) - mi(&sz, &sy))?;
    let h = |v: &[usize]| measures::entropy(d, &s(v)).unwrap();
    let expansion = -h(&[x]) - h(&[y]) - h(&[z]) + h(&[x, y]) + h(&[x, z]) + h(&[y, z]) - h(&[x, y, z]);
    close("three-variable entropy expansion", ii, expansion)?;
    close("I(XY;Z) - I(X;Z) - I(Y;Z)", ii, mi(&s(&[x, y]), &sz) - mi(&sx, &sz) - mi(&sy, &sz))
}

/// Checks every identity that applies to `d` (2–4 variables).
pub fn check(d: &DiscreteDistribution) -> Result<(), String> {
    let n = d.num_variables();
    let all = d.all();

    for i in 0..n {
        for j in i + 1..n {
            mutual_information_forms(d, &s(&[i]), &s(&[j])).map_err(|e| format!("MI({i};{j}) {e}"))?;
        }
        let rest = all.without(i);
        if !rest.is_empty() {
            mutual_information_forms(d, &s(&[i]), &rest).map_err(|e| format!("MI({i};rest) {e}"))?;
        }
    }

    if n >= 3 {
        for (x, y, z) in [(0, 1, 2), (n - 1, 0, 1), (1, n - 1, 0)] {
            interaction_information_forms(d, x, y, z).map_err(|e| format!("II({x};{y};{z}) {e}"))?;
        }
    }

    let ii = measures::interaction_information(d, &all).unwrap();
    close("II subset expansion", ii, ii_expansion(d, &all))?;
    let ci = measures::co_information(d, &all).unwrap();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    if ci != sign * ii {
        return Err(format!("CI sign law is not exact: CI = {ci}, II = {ii}"));
    }

    let tc = measures::total_correlation(d, &all).unwrap();
    let mut chain = 0.0;
    for k in 1..n {
        chain += measures::mutual_information(d, &IndexSet::range(k), &s(&[k])).unwrap();
    }
    close("TC chain form", tc, chain)?;
    let marginals: f64 = (0..n).map(|i| measures::entropy(d, &s(&[i])).unwrap()).sum();
    close("TC entropy form", tc, marginals - measures::entropy(d, &all).unwrap())?;

    let dtc = measures::dual_total_correlation(d, &all).unwrap();
    let h_all = measures::entropy(d, &all).unwrap();
    let residual: f64 = (0..n)
        .map(|i| measures::conditional_entropy(d, &s(&[i]), &all.without(i)).unwrap())
        .sum();
    close("DTC residual-entropy form", dtc, h_all - residual)?;
    let leave_one_out: f64 = (0..n)
        .map(|i| measures::mutual_information(d, &all.without(i), &s(&[i])).unwrap())
        .sum();
    close("DTC from TC", dtc, leave_one_out - tc)?;

    for target in 0..n {
        check_split(d, target).map_err(|e| format!("target {target}: {e}"))?;
    }
    Ok(())
}

/// Split-dependent checks with every other variable as a source.
pub fn check_split(d: &DiscreteDistribution, target: usize) -> Result<(), String> {
    let n = d.num_variables();
    let sources = d.all().without(target);
    let split = SourceTargetSplit::new(d, sources.clone(), target).unwrap();
    let y = split.target_set();
    let mi = measures::split_mutual_information(d, &split).unwrap();

    let delta = measures::delta_i(d, &split).unwrap();
    if delta < 0.0 {
        return Err(format!("ΔI negative: {delta}"));
    }
    close("gap = I − ΔI", measures::mi_delta_gap(d, &split).unwrap(), mi - delta)?;

    if n < 3 {
        return Ok(());
    }
    let singles: f64 = sources
        .members()
        .iter()
        .map(|&i| measures::mutual_information(d, &s(&[i]), &y).unwrap())
        .sum();
    // With two sources II = RSI = VS. With three, the four-way II has no such
    // floor (see `four_way_ii_is_unbounded_by_single_informations`).
    let mut bounded = vec![
        ("RSI", measures::redundancy_synergy_index(d, &split).unwrap()),
        ("VS", measures::varadan_synergy(d, &split).unwrap()),
    ];
    if n == 3 {
        bounded.push(("II", measures::interaction_information(d, &d.all()).unwrap()));
    }
    for (name, v) in bounded {
        if v < -singles - TOL {
            return Err(format!("{name} = {v} below −Σ I(X_i;Y) = {}", -singles));
        }
    }

    let p = pid::decompose(d, &split).map_err(|e| format!("decompose: {e}"))?;
    for (node, t) in p.terms() {
        if t < 0.0 {
            return Err(format!("PID term {node} negative: {t}"));
        }
    }
    close("PID sum = I(S;Y)", p.total(), mi)?;
    for a in p.nodes() {
        for b in p.nodes() {
            if a.precedes(b) && p.i_min(a).unwrap() > p.i_min(b).unwrap() + TOL {
                return Err(format!("I_min not monotone: {a} ≤ {b}"));
            }
        }
    }

    let ii = measures::interaction_information(d, &d.all()).unwrap();
    let t = |label: &str| p.term_by_label(label).unwrap();
    if n == 3 {
        let src = sources.members();
        let red = t("{1}{2}");
        close("I(X1;Y) = U1 + Red", measures::mutual_information(d, &s(&[src[0]]), &y).unwrap(), t("{1}") + red)?;
        close("I(X2;Y) = U2 + Red", measures::mutual_information(d, &s(&[src[1]]), &y).unwrap(), t("{2}") + red)?;
        close("II = Syn − Red", ii, t("{12}") - red)?;
    } else if n == 4 {
        let combo = t("{123}") + t("{1}{2}{3}")
            - t("{1}{23}")
            - t("{2}{13}")
            - t("{3}{12}")
            - t("{12}{13}")
            - t("{12}{23}")
            - t("{13}{23}")
            - 2.0 * t("{12}{13}{23}");
        close("four-way II from PID terms", ii, combo)?;
    }
    let residual = pid::ii_consistency(d, &split, &p).unwrap();
    if residual.abs() > TOL {
        return Err(format!("ii_consistency residual {residual:e}"));
    }
    Ok(())
}
