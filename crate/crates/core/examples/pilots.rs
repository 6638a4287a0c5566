//! Monte-Carlo pilots used to fix the finite-scale thresholds in the acceptance suite.

use rayon::prelude::*;
use signlab::graph::{
    summarize, three_hop_search, EnsembleSpec, GraphExperiment, GraphMode, PrimeTable,
    ProfiniteSample, ResidueModel, SampleSeed, ThreeHop,
};

fn connectivity(x: i64, trials: u64, seed: u64) -> f64 {
    let exp = GraphExperiment {
        mode: GraphMode::Profinite,
        seed,
        x,
        window: Some((0, 2 * x)),
        w: 50,
        p: 2 * x as u64,
        trials,
        ensemble: None,
    };
    summarize(&exp.run().unwrap()).connectivity_fraction.unwrap()
}

fn ensemble(k: usize, imin: u64, imax: u64, trials: u64, seed: u64) {
    let exp = GraphExperiment {
        mode: GraphMode::Profinite,
        seed,
        x: 0,
        window: None,
        w: 50,
        p: imax,
        trials,
        ensemble: Some(EnsembleSpec { k, imin, imax }),
    };
    let s = summarize(&exp.run().unwrap());
    println!(
        "ensemble k={k} I=[{imin},{imax}]: conditioned={} mean S1={:.4} mean S1^2={:.4} mean collision={:.4}",
        s.ensemble_trials,
        s.mean_s1.unwrap(),
        s.mean_s1_squared.unwrap(),
        s.mean_collision.unwrap()
    );
}

fn three_hop(x: u64, trials: u64, seed: u64) -> f64 {
    let table = PrimeTable::new(7 * x);
    let found = (0..trials)
        .into_par_iter()
        .filter(|&trial| {
            let s = ProfiniteSample::draw(&table, 7 * x, 50, SampleSeed { master: seed, trial }).unwrap();
            let vs: Vec<i64> = (0..=x as i64).filter(|&a| s.is_vertex(a)).collect();
            let a: Vec<i64> = vs.iter().copied().filter(|v| v % 2 == 1).collect();
            let b: Vec<i64> = vs.iter().copied().filter(|v| v % 2 == 0).collect();
            matches!(three_hop_search(&s, &a, &b, x).unwrap(), ThreeHop::Found(_))
        })
        .count();
    found as f64 / trials as f64
}

fn main() {
    let arg: Vec<String> = std::env::args().collect();
    match arg.get(1).map(String::as_str) {
        Some("ensemble") => {
            let imax: u64 = arg[2].parse().unwrap();
            let seed: u64 = arg.get(3).map_or(7, |s| s.parse().unwrap());
            let t = std::time::Instant::now();
            let imin: u64 = arg.get(4).map_or(100, |s| s.parse().unwrap());
            ensemble(3, imin, imax, 1000, seed);
            println!("{:?}", t.elapsed());
        }
        Some("triples") => {
            use signlab::circle::*;
            let x = 2000u64;
            let scale = (x * x) as f64 / (x as f64).ln().powi(3);
            let w50 = TripleSpec::new(x, 1, 0, 50).unwrap();
            println!("w=50 count/scale = {:.4}", count_triples(&w50).unwrap() as f64 / scale);
            let plain = TripleSpec::new(x, 1, 0, 1).unwrap();
            let n = count_triples(&plain).unwrap() as f64;
            let pred = main_term_prediction(&plain).unwrap();
            println!("k=1 observed {n} predicted {:.1} ratio {:.4}", pred.value, n / pred.value);
            let cls = plain.with_classes(3, 1, 1).unwrap();
            let n = count_triples_in_classes(&cls).unwrap() as f64;
            let pred = main_term_prediction(&cls).unwrap();
            println!("k=3 observed {n} predicted {:.1} ratio {:.4} crude {:.4}", pred.value, n / pred.value, n / (scale / 24.0));
        }
        _ => {
            for x in [250, 500, 1000, 2000] {
                println!("connectivity X={x}: {:.4}", connectivity(x, 1000, 7));
            }
            println!("three-hop X=500 dense: {:.4}", three_hop(500, 200, 7));
        }
    }
}
