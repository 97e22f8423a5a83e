use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use padwave::families::*;
use padwave::json::*;
use padwave::moments::{profile_of_function, profile_of_sequence, vanishing_order, MomentProfile};
use padwave::mra::{
    self, approximation_order, bank_scales, fourier_refinement_check, mask_orthonormality_test, mask_sum_check,
    shift_orthonormality, solve_haar_mask, strang_fix, SymbolCondition,
};
use padwave::{CycMatrix, CycNumber, Mode, Rat, StepFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{self, prime, rational};
use crate::report::{Failure, Output, Report};

type Res = Result<Output, Failure>;

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn rats(v: &[Rat]) -> Value {
    v.iter().map(rat_str).collect::<Vec<_>>().into()
}

fn condition(c: &SymbolCondition) -> Value {
    json!({ "k": c.k, "value": cyc_json(&c.value), "passed": c.passed })
}

fn sigma_json(sigma: &BTreeMap<(u64, u64), CycNumber>) -> Value {
    Value::Object(
        sigma
            .iter()
            .map(|((j, m), c)| (format!("{},{}", j, m), cyc_json(c)))
            .collect(),
    )
}

/// E(μ) for μ < k.
fn moment_values(pr: &MomentProfile, k: u32) -> Value {
    Value::Object((0..k).map(|mu| (mu.to_string(), cyc_json(&pr.eval(mu)))).collect())
}

pub fn haar_mask(p: u64) -> Res {
    let pr = prime(p)?;
    let h = solve_haar_mask(pr)?;
    let ortho = mask_orthonormality_test(&h);
    let sum_ok = mask_sum_check(&h);
    let mut r = Report::new("haar-mask");
    r.input("p", p)
        .result("mask", mask_json(&h))
        .result("sum", cyc_json(&h.sum()))
        .result(
            "orthonormality",
            json!({
                "atZero": condition(&ortho.at_zero),
                "vanishing": ortho.vanishing.iter().map(condition).collect::<Vec<_>>(),
                "unimodular": ortho.unimodular.iter().map(condition).collect::<Vec<_>>(),
            }),
        )
        .check("maskSum", sum_ok)
        .check("orthonormality", ortho.passed);
    Ok(r.finish())
}

pub fn family_haar_type(p: u64, s: u32, params: Option<&Path>, seed: Option<u64>) -> Res {
    let pr = prime(p)?;
    if s > 4 {
        return Err(Failure::Usage(format!("s = {} is too large (at most 4)", s)));
    }
    let prm = match (params, seed) {
        (_, Some(seed)) => HaarTypeParams::random(pr, s, &mut ChaCha8Rng::seed_from_u64(seed)),
        (Some(path), None) => {
            let file = input::read_haar_type_params(path)?;
            let d = HaarTypeParams::default_for(pr, s);
            HaarTypeParams::new(
                pr,
                s,
                file.sigma.unwrap_or_else(|| d.sigma().clone()),
                file.z.unwrap_or_else(|| d.z().clone()),
            )?
        }
        (None, None) => HaarTypeParams::default_for(pr, s),
    };
    let ws = haar_type_wavelets(&prm)?;
    let rows = haar_type_moment_criterion(&prm)?;
    let h = haar_mask_at_level(pr, s);
    let filters: Vec<_> = ws.iter().map(|w| w.filter.clone()).collect();
    let bank = mra::verify_filter_bank(&h, &filters, None)?;

    let mut r = Report::new("family haar-type");
    r.input("p", p)
        .input("s", s)
        .input("sigma", sigma_json(prm.sigma()))
        .input("Z", matrix_json(prm.z()));
    if let Some(path) = params {
        r.input("params", path_str(path));
    }
    if let Some(seed) = seed {
        r.input("seed", seed);
    }
    let mut out = Vec::new();
    let mut reexpressed = true;
    for (w, row) in ws.iter().zip(&rows) {
        let same = haar_type_from_filter(w)? == w.psi;
        reexpressed &= same;
        out.push(json!({
            "j": w.j,
            "psi": stepfn_json(&w.psi),
            "filter": mask_json(&w.filter),
            "filterSum": cyc_json(&w.filter.sum()),
            "filterSumZero": row.filter_sum_zero,
            "h0": cyc_json(&row.h0),
            "sequenceOrder": row.sequence_order.to_string(),
            "functionOrder": row.function_order.to_string(),
            "profileMatches": row.profile_matches,
            "dichotomy": row.dichotomy,
            "maskReexpression": same,
        }));
    }
    r.result("mask", mask_json(&h))
        .result("wavelets", out)
        .result(
            "filterBank",
            json!({ "orthogonal": bank.orthogonal, "normalized": bank.normalized, "passed": bank.passed }),
        )
        .check("filterSumsZero", rows.iter().all(|x| x.filter_sum_zero))
        .check("dichotomy", rows.iter().all(|x| x.dichotomy))
        .check("profiles", rows.iter().all(|x| x.profile_matches))
        .check("maskReexpression", reexpressed)
        .check("filterBank", bank.passed);
    Ok(r.finish())
}

#[allow(clippy::too_many_arguments)]
pub fn family_non_haar(p: u64, m: u32, nu: u32, k: u32, mode: Mode, params: Option<&Path>, seed: Option<u64>) -> Res {
    let pr = prime(p)?;
    if m == 0 || m > 3 || nu == 0 || nu > 3 || k > 6 {
        return Err(Failure::Usage("need 1 ≤ m ≤ 3, 1 ≤ ν ≤ 3 and k ≤ 6".into()));
    }
    let js = jpm(pr, m);
    let len = pr.pow_u64(nu) as usize;
    let mut gamma = match params {
        Some(path) => input::read_gamma(path, len)?,
        None => BTreeMap::new(),
    };
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in &js {
            gamma.insert(s.clone(), NonHaarParams::random(pr, m, nu, s.clone(), &mut rng)?.gamma);
        }
    }
    let rep = non_haar_moment_check(pr, m, k, nu, &gamma, mode)?;
    let thetas: Vec<StepFunction> = js.iter().map(|s| theta_wavelet(pr, m, s)).collect::<Result<_, _>>()?;

    let mut r = Report::new("family non-haar");
    r.input("p", p)
        .input("m", m)
        .input("nu", nu)
        .input("k", k)
        .input("mode", mode.to_string());
    if let Some(path) = params {
        r.input("params", path_str(path));
    }
    if let Some(seed) = seed {
        r.input("seed", seed);
    }
    let mut rows = Vec::new();
    let mut collapse = true;
    for (row, theta) in rep.rows.iter().zip(&thetas) {
        let prm = match gamma.get(&row.s) {
            Some(g) => NonHaarParams::new(pr, m, nu, row.s.clone(), g.clone())?,
            None => NonHaarParams::default_for(pr, m, nu, row.s.clone())?,
        };
        let all_one = prm.gamma.iter().all(CycNumber::is_one);
        let (psi, alphas) = non_haar_wavelet(&prm)?;
        let equal = psi == *theta;
        if all_one {
            collapse &= equal;
        }
        rows.push(json!({
            "s": rat_str(&row.s),
            "gamma": prm.gamma.iter().map(cyc_json).collect::<Vec<_>>(),
            "alphas": alphas.iter().map(cyc_json).collect::<Vec<_>>(),
            "theta": stepfn_json(theta),
            "psi": stepfn_json(&psi),
            "psiEqualsTheta": equal,
            "thetaOrder": row.theta_order.to_string(),
            "psiOrder": row.psi_order.to_string(),
            "thetaShiftIdentity": row.theta_shift_identity,
            "directPath": row.direct_path,
            "leibnizValues": row.leibniz_values.iter().map(cyc_json).collect::<Vec<_>>(),
            "pathsAgree": row.paths_agree,
            "implication": row.implication,
        }));
    }
    // ⟨θ_s, θ_{s'}(· − a)⟩ = δ_{s,s'} δ_{0,a} over |a| ≤ p^2
    let mut ortho = true;
    for (i, a) in thetas.iter().enumerate() {
        for (j, b) in thetas.iter().enumerate() {
            let sr = shift_orthonormality(a, b, 2)?;
            ortho &= if i == j { sr.delta } else { sr.all_zero };
        }
    }
    r.result("J", rats(&js))
        .result("phiOrder", rep.phi_order)
        .result("wavelets", rows)
        .result("thetaOrthonormality", json!({ "gammaMax": 2, "passed": ortho }))
        .check("thetaOrthonormality", ortho)
        .check("thetaShiftIdentity", rep.rows.iter().all(|x| x.theta_shift_identity))
        .check("directPath", rep.rows.iter().all(|x| x.direct_path))
        .check("pathsAgree", rep.rows.iter().all(|x| x.paths_agree))
        .check("implication", rep.rows.iter().all(|x| x.implication))
        .check("collapse", collapse);
    Ok(r.finish())
}

pub fn family_riesz(p: u64, m: u32, n: u32, k: u32, gram_gamma: u32) -> Res {
    let pr = prime(p)?;
    if pr.pow_u64(m + n + 1) > 4096 || k > 6 || gram_gamma > 3 {
        return Err(Failure::Usage(
            "need p^(M+N+1) ≤ 4096, k ≤ 6 and --gram-gamma ≤ 3".into(),
        ));
    }
    let kk = m + n;
    let (a, b) = riesz_index_sets(pr, kk);
    let (m0, n0) = riesz_masks(pr, kk);
    let adm = riesz_admissible(pr, m, n);
    let sys = riesz_system(pr, m, n);
    let mask = riesz_mask(pr, m, n);
    let gen = mra::mra_generation_check(&sys.phi, m, n, mask.as_ref())?;
    let (phi_nz, psi_nz) = riesz_grid_patterns(&sys);
    let (eb, ea) = riesz_expected_patterns(pr, kk);
    let mut moments = Vec::new();
    let mut bicond = true;
    for mode in [Mode::Real, Mode::Integer] {
        for j in 1..=k {
            let rm = riesz_moment_criterion(&sys, j, mode);
            bicond &= rm.biconditional;
            moments.push(json!({
                "mode": mode.to_string(),
                "k": j,
                "n0Order": rm.n0_order.to_string(),
                "waveletOrders": rm.wavelet_orders.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
                "biconditional": rm.biconditional,
                "translationInvariant": rm.translation_invariant,
            }));
        }
    }
    let mut fns = vec![sys.phi.clone()];
    fns.extend(sys.wavelets.iter().take(1).cloned());
    let gram = gram_spectrum_estimate(&fns, gram_gamma)?;

    let mut r = Report::new("family riesz");
    r.input("p", p).input("M", m).input("N", n).input("k", k);
    r.result("indexSets", json!({ "A": rats(&a), "B": rats(&b) }))
        .result(
            "masks",
            json!({
                "m0": trig_json(&m0),
                "n0": trig_json(&n0),
                "m0AtZero": cyc_json(&m0.eval(&Rat::from_integer(0.into()))),
                "n0AtZero": cyc_json(&n0.eval(&Rat::from_integer(0.into()))),
                "refinementMask": mask.as_ref().map(mask_json),
            }),
        )
        .result("admissible", adm.generates_mra)
        .result("rieszEquality", adm.riesz_equality)
        .result(
            "generation",
            json!({ "count": gen.count, "bound": gen.bound, "nonzeroAt": gen.nonzero_at, "refinable": gen.refinable }),
        )
        .result(
            "patterns",
            json!({ "phiHat": phi_nz, "psiHat": psi_nz, "expectedPhiHat": eb, "expectedPsiHat": ea }),
        )
        .result("moments", moments)
        .result("phi", stepfn_json(&sys.phi))
        .result("wavelets", sys.wavelets.iter().map(stepfn_json).collect::<Vec<_>>())
        .check(
            "indexSetSizes",
            b.len() as u64 == 1 + kk as u64 * (p - 1) && a.len() == (p as usize - 1) * b.len(),
        )
        .check("m0AtZero", m0.eval(&Rat::from_integer(0.into())).is_one())
        .check("n0AtZero", n0.eval(&Rat::from_integer(0.into())).is_zero())
        .check(
            "generationMatchesAdmissibility",
            (gen.count <= gen.bound) == adm.generates_mra,
        )
        .check("refinable", gen.refinable != Some(false))
        .check("patterns", phi_nz == eb && psi_nz == ea)
        .check("momentBiconditional", bicond)
        .advisory(json!({
            "gram": {
                "functions": fns.len(),
                "gammaMax": gram_gamma,
                "size": gram.size,
                "minEigenvalue": gram.min,
                "maxEigenvalue": gram.max,
            }
        }));
    Ok(r.finish())
}

pub fn moments(function: &Path, mode: Mode, max_k: u32, at: &str) -> Res {
    let f = input::read_function(function)?;
    let u = rational(at)?;
    let pr = profile_of_function(&f, &u);
    let order = vanishing_order(&pr, mode, max_k);
    let mut r = Report::new("moments");
    r.input("function", path_str(function))
        .input("at", rat_str(&u))
        .input("maxK", max_k);
    r.result("mode", mode.to_string())
        .result("order", order.to_string())
        .result("values", moment_values(&pr, max_k))
        .result("profile", profile_json(&pr));
    Ok(r.finish())
}

pub fn moments_discrete(mask: &Path, mode: Mode, max_k: u32) -> Res {
    let h = input::read_mask(mask)?;
    let pr = profile_of_sequence(&h);
    let order = vanishing_order(&pr, mode, max_k);
    let mut r = Report::new("moments-discrete");
    r.input("mask", path_str(mask)).input("maxK", max_k);
    r.result("mode", mode.to_string())
        .result("order", order.to_string())
        .result("values", moment_values(&pr, max_k))
        .result("profile", profile_json(&pr));
    Ok(r.finish())
}

pub fn fourier(function: &Path, inverse: bool, reflect: bool) -> Res {
    let f = input::read_function(function)?;
    let mut g = if inverse { f.inverse_fourier() } else { f.fourier() };
    if reflect {
        g = g.reflect();
    }
    Ok(Output::object("function", stepfn_json(&g)))
}

pub fn verify_refinement(function: &Path, mask: &Path) -> Res {
    let phi = input::read_function(function)?;
    let h = input::read_mask(mask)?;
    let direct = mra::verify_refinement(&phi, &h)?;
    let spectral = fourier_refinement_check(&phi, &h)?;
    if direct != spectral {
        return Err(Failure::Internal(format!(
            "refinement routes disagree: direct {} vs Fourier {}",
            direct, spectral
        )));
    }
    let mut r = Report::new("verify refinement");
    r.input("function", path_str(function)).input("mask", path_str(mask));
    r.result("direct", direct)
        .result("fourier", spectral)
        .check("refinement", direct);
    Ok(r.finish())
}

pub fn verify_orthonormality(
    mask: Option<&Path>,
    function: Option<&Path>,
    other: Option<&Path>,
    gamma_max: u32,
) -> Res {
    let mut r = Report::new("verify orthonormality");
    if let Some(mask) = mask {
        let h = input::read_mask(mask)?;
        let rep = mask_orthonormality_test(&h);
        r.input("mask", path_str(mask))
            .result("atZero", condition(&rep.at_zero))
            .result("vanishing", rep.vanishing.iter().map(condition).collect::<Vec<_>>())
            .result("unimodular", rep.unimodular.iter().map(condition).collect::<Vec<_>>())
            .check("orthonormality", rep.passed);
        return Ok(r.finish());
    }
    let function = function.ok_or_else(|| Failure::Usage("--mask or --function is required".into()))?;
    if gamma_max > 4 {
        return Err(Failure::Usage("--gamma-max is at most 4".into()));
    }
    let f = input::read_function(function)?;
    let g = other.map(input::read_function).transpose()?;
    let rep = shift_orthonormality(&f, g.as_ref().unwrap_or(&f), gamma_max)?;
    let nonzero: Vec<Value> = rep
        .values
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(a, v)| json!({ "a": rat_str(a), "value": cyc_json(v) }))
        .collect();
    r.input("function", path_str(function)).input("gammaMax", gamma_max);
    if let Some(o) = other {
        r.input("other", path_str(o));
    }
    r.result("shifts", rep.values.len()).result("nonzero", nonzero);
    if g.is_some() {
        r.check("orthogonal", rep.all_zero);
    } else {
        r.check("orthonormal", rep.delta);
    }
    Ok(r.finish())
}

pub fn verify_filter_bank(mask: &Path, wavelets: &[PathBuf], scales: Option<&str>, auto: bool) -> Res {
    let h = input::read_mask(mask)?;
    let ws = wavelets
        .iter()
        .map(|w| input::read_mask(w))
        .collect::<Result<Vec<_>, _>>()?;
    let scales: Option<Vec<Rat>> = match (scales, auto) {
        (Some(s), _) => Some(s.split(',').map(rational).collect::<Result<_, _>>()?),
        (None, true) => Some(
            bank_scales(&ws)
                .ok_or_else(|| Failure::Input("a wavelet filter has a zero or irrational squared norm".into()))?,
        ),
        (None, false) => None,
    };
    let rep = mra::verify_filter_bank(&h, &ws, scales.as_deref())?;
    let u: CycMatrix = mra::build_u(&h, &ws)?;
    let mut r = Report::new("verify filter-bank");
    r.input("mask", path_str(mask))
        .input("wavelets", wavelets.iter().map(|w| path_str(w)).collect::<Vec<_>>());
    r.result("scales", rats(&rep.scales))
        .result("size", u.rows())
        .result("orthogonal", rep.orthogonal)
        .result("normalized", rep.normalized)
        .check("filterBank", rep.passed);
    Ok(r.finish())
}

pub fn verify_strang_fix(mask: &Path, k: u32, mode: Mode) -> Res {
    let h = input::read_mask(mask)?;
    let rep = strang_fix(&h, k, mode);
    let mut r = Report::new("verify strang-fix");
    r.input("mask", path_str(mask))
        .input("k", k)
        .input("mode", mode.to_string());
    r.result(
        "orders",
        rep.orders
            .iter()
            .map(|(j, o)| json!({ "j": j, "order": o.to_string() }))
            .collect::<Vec<_>>(),
    )
    .check("strangFix", rep.holds);
    Ok(r.finish())
}

pub fn verify_approx_order(function: &Path, k: u32, mode: Mode, gamma_max: Option<u32>) -> Res {
    let phi = input::read_function(function)?;
    if k > 8 || gamma_max.is_some_and(|g| g > 6) {
        return Err(Failure::Usage("need k ≤ 8 and --gamma-max ≤ 6".into()));
    }
    let rep = approximation_order(&phi, k, gamma_max, mode);
    let mut r = Report::new("verify approx-order");
    r.input("function", path_str(function))
        .input("k", k)
        .input("mode", mode.to_string());
    r.result("supportExponent", rep.support_exp)
        .result("level", rep.level)
        .result(
            "witness",
            rep.witness
                .as_ref()
                .map(|(a, o)| json!({ "alpha": rat_str(a), "order": o.to_string() })),
        )
        .check("approximationOrder", rep.holds);
    Ok(r.finish())
}
