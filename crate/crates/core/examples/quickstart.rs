//! Minimal end-to-end use: generate a seeded instance, enumerate its
//! region, and maximize the objective exactly.

use fiberopt::harness::{gen_instance, GenOptions, InstanceKind};
use fiberopt::optimize::quasiconvex_max;
use fiberopt::weights::DEFAULT_GRID_CAP;

fn main() -> Result<(), fiberopt::Error> {
    let instance = gen_instance(InstanceKind::RandomPoints, 7, &GenOptions::default())?;
    let region = instance.explicit().expect("random-points instances are explicit").to_vrep()?;
    let f = instance.oracle()?;
    let best =
        quasiconvex_max(&region, &instance.weights, instance.beta(), &f, DEFAULT_GRID_CAP)?;
    println!("optimal image {:?} with value {}", best.image, best.value);
    Ok(())
}
