use pa_forge::{FieldElem, NttPlan, Radix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<FieldElem> {
    (0..n).map(|_| FieldElem::new(rng.gen())).collect()
}

#[test]
fn roundtrip_thousand_vectors_per_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for size in [16usize, 256, 4096, 65536] {
        let plan = NttPlan::new(size, Radix::R16).unwrap();
        let mut freq = vec![FieldElem::ZERO; size];
        let mut back = vec![FieldElem::ZERO; size];
        for i in 0..1000 {
            let v = random_vec(&mut rng, size);
            plan.forward_into(&v, &mut freq).unwrap();
            plan.inverse_into(&freq, &mut back).unwrap();
            assert_eq!(back, v, "size {size}, vector {i}");
        }
    }
}

#[test]
fn roundtrip_other_radices() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for radix in [Radix::R2, Radix::R4] {
        for size in [16usize, 256, 4096, 65536] {
            let plan = NttPlan::new(size, radix).unwrap();
            let count = if size == 65536 { 20 } else { 200 };
            for _ in 0..count {
                let v = random_vec(&mut rng, size);
                assert_eq!(plan.inverse(&plan.forward(&v).unwrap()).unwrap(), v);
            }
        }
    }
}

#[test]
fn radix_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for log2 in 1..=16u32 {
        let size = 1usize << log2;
        let plans: Vec<_> = Radix::ALL.iter().map(|&r| NttPlan::new(size, r).unwrap()).collect();
        for _ in 0..3 {
            let v = random_vec(&mut rng, size);
            let reference = plans[0].forward(&v).unwrap();
            for plan in &plans[1..] {
                assert_eq!(plan.forward(&v).unwrap(), reference, "size {size}, radix {}", plan.radix());
            }
        }
    }
}

#[test]
fn linearity() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for size in [16usize, 512, 4096] {
        for radix in Radix::ALL {
            let plan = NttPlan::new(size, radix).unwrap();
            for _ in 0..10 {
                let (u, v) = (random_vec(&mut rng, size), random_vec(&mut rng, size));
                let (a, b) = (FieldElem::new(rng.gen()), FieldElem::new(rng.gen()));
                let mix: Vec<_> = u.iter().zip(&v).map(|(x, y)| a * *x + b * *y).collect();
                let (fu, fv) = (plan.forward(&u).unwrap(), plan.forward(&v).unwrap());
                let expected: Vec<_> = fu.iter().zip(&fv).map(|(x, y)| a * *x + b * *y).collect();
                assert_eq!(plan.forward(&mix).unwrap(), expected);
            }
        }
    }
}

#[test]
fn shared_plan_across_threads() {
    let plan = NttPlan::new(4096, Radix::R16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let inputs: Vec<_> = (0..4).map(|_| random_vec(&mut rng, 4096)).collect();
    let serial: Vec<_> = inputs.iter().map(|v| plan.forward(v).unwrap()).collect();
    let parallel: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = inputs.iter().map(|v| s.spawn(|| plan.forward(v).unwrap())).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(serial, parallel);
}
