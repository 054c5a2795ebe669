//! Max-norm convergence with and without the implicit Euler start-up, next to the
//! predicted error. A reduced domain keeps the run short.

use mcs_adi::config::RunConfig;
use mcs_adi::experiments::run_convergence;

fn main() {
    for n0 in [2, 0] {
        let mut cfg = RunConfig::reference();
        cfg.scheme.lambda = 0.8;
        cfg.scheme.n0 = n0;
        cfg.domain.min = -8.0;
        cfg.domain.max = 4.0;
        cfg.mesh.inv_h = vec![8, 16, 32];
        println!("theta = 1/3, lambda = 0.8, n0 = {n0}");
        println!("  1/h      error      order  predicted total");
        for r in run_convergence(&cfg) {
            if let Some(msg) = r.failure {
                println!("  {:3}  failed: {msg}", r.inv_h);
                continue;
            }
            println!("  {:3}  {:.4e}  {:6.3}  {:.4e}", r.inv_h, r.error, r.order, r.predicted.total);
        }
    }
}
