use ped_core::bench::{fit_and_evaluate, ForestOverrides};
use ped_core::data::{ColumnSchema, Dataset};
use ped_core::Seed;
use rand::Rng;
use rand_distr::StandardNormal;

// Threenorm conditionals with a configurable majority class and assignment.
// mixture_is_majority: the two-mode mixture class carries the 95%.
fn gen(n: usize, p: usize, mixture_is_majority: bool, seed: Seed) -> Dataset {
    let a = 2.0 / (p as f64).sqrt();
    let mut rng = seed.rng();
    let mut columns = vec![vec![0.0; n]; p];
    let mut labels = vec![0u32; n];
    for i in 0..n {
        let majority = rng.random::<f64>() < 0.95;
        let mixture = majority == mixture_is_majority;
        labels[i] = u32::from(!majority);
        if mixture {
            let sign = if rng.random::<f64>() < 0.5 { 1.0 } else { -1.0 };
            for col in columns.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                col[i] = sign * a + z;
            }
        } else {
            for (j, col) in columns.iter_mut().enumerate() {
                let z: f64 = rng.sample(StandardNormal);
                col[i] = if j % 2 == 0 { a } else { -a } + z;
            }
        }
    }
    Dataset::new(
        (0..p).map(|j| ColumnSchema::continuous(format!("x{j}"))).collect(),
        columns,
        labels,
        vec!["0".into(), "1".into()],
        "y",
    )
    .unwrap()
}

fn main() {
    for p in [20usize, 2] {
        for mixture_majority in [true, false] {
            let train = gen(100_000, p, mixture_majority, Seed::new(1));
            let test = gen(10_000, p, mixture_majority, Seed::new(2));
            let rows: Vec<usize> = (0..train.n_rows()).collect();
            let report = fit_and_evaluate(
                &train,
                &rows,
                &test,
                &ForestOverrides::default().config(Seed::new(3)),
            )
            .unwrap();
            println!(
                "p={p} mixture_is_majority={mixture_majority}: accuracy {:.2}%   [table: p20 -> 97.68, p2 -> 96.30]",
                report.accuracy * 100.0
            );
        }
    }
}
