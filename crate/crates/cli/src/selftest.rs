//! Seeded spot checks of the identities the library relies on.

use padwave::mra::{mask_orthonormality_test, solve_haar_mask};
use padwave::padic::rat;
use padwave::stepfn::Piece;
use padwave::{Ball, CycNumber, Prime, Rat, StepFunction};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{Failure, Output, Report};

fn rand_rat<R: Rng>(rng: &mut R, span: i64, max_den: i64) -> Rat {
    rat(rng.gen_range(-span..=span), rng.gen_range(1..=max_den))
}

fn rand_cyc<R: Rng>(rng: &mut R, n: u64) -> CycNumber {
    (0..3)
        .map(|_| CycNumber::root_of_unity(rng.gen_range(0..n as i64), n).scale(&rand_rat(rng, 4, 3)))
        .sum()
}

fn rand_point<R: Rng>(rng: &mut R, p: Prime) -> Rat {
    let e = rng.gen_range(0..=3u32);
    Rat::new(rng.gen_range(-30i64..=30).into(), p.pow_int(e))
}

fn rand_function<R: Rng>(rng: &mut R, p: Prime) -> StepFunction {
    let n = rng.gen_range(1..=4);
    let pieces = (0..n)
        .map(|_| {
            let ball = Ball::new(&rand_point(rng, p), rng.gen_range(-3..=3), p);
            let freq = rand_point(rng, p);
            Piece::new(ball, freq, rand_cyc(rng, p.get()))
        })
        .collect();
    StepFunction::from_pieces(p, pieces)
}

pub fn run(seed: u64, cases: u32) -> Result<Output, Failure> {
    if cases > 500 {
        return Err(Failure::Usage("--cases is at most 500".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally: Vec<(&'static str, u32, Vec<u32>)> = Vec::new();
    let mut record = |name: &'static str, case: u32, ok: bool| match tally.iter_mut().find(|(n, _, _)| *n == name) {
        Some(t) => {
            t.1 += 1;
            if !ok {
                t.2.push(case);
            }
        }
        None => tally.push((name, 1, if ok { vec![] } else { vec![case] })),
    };
    for case in 0..cases {
        let p = Prime::new([2u64, 3, 5][case as usize % 3]).expect("prime");
        let f = rand_function(&mut rng, p);
        let g = rand_function(&mut rng, p);
        let b = rand_point(&mut rng, p);
        let j = rng.gen_range(-2..=2i64);
        let fh = f.fourier();
        record(
            "parseval",
            case,
            f.inner_product(&g)? == fh.inner_product(&g.fourier())?,
        );
        record("involution", case, fh.fourier() == f.reflect());
        record("inverse", case, fh.inverse_fourier() == f);
        record("translation", case, f.translate(&b).fourier() == fh.modulate(&b));
        record("modulation", case, f.modulate(&b).fourier() == fh.translate(&-&b));
        record(
            "dilation",
            case,
            f.dilate(j).fourier() == fh.dilate(-j).scale(&CycNumber::from_rat(&p.pow(j))),
        );

        let n = rng.gen_range(1..=24u64);
        let (x, y, z) = (rand_cyc(&mut rng, n), rand_cyc(&mut rng, n), rand_cyc(&mut rng, n));
        record("distributivity", case, &x * &(&y + &z) == &(&x * &y) + &(&x * &z));
        record("conjugation", case, (&x * &y).conj() == &x.conj() * &y.conj());
        let inv_ok = x.is_zero() || (&x * &x.inv()?).is_one();
        record("inversion", case, inv_ok);
        record("floatZeroTest", case, x.is_zero() == (x.to_complex().norm() < 1e-9));
    }
    for q in [2u64, 3, 5, 7] {
        let h = solve_haar_mask(Prime::new(q).expect("prime"))?;
        record("haarMask", q as u32, mask_orthonormality_test(&h).passed);
    }

    let mut r = Report::new("selftest");
    r.input("seed", seed).input("cases", cases);
    for (name, runs, failed) in tally {
        r.result(name, json!({ "runs": runs, "failedCases": failed }));
        r.check(name, failed.is_empty());
    }
    Ok(r.finish())
}
