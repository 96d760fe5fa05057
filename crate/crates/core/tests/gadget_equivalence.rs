use gridreach::block::Block;
use gridreach::circle::{build_circle, InnerSolver};
use gridreach::gadget::{check_planar, embed_exact, transform_with, TransformOptions};
use gridreach::grid::gen_random;
use gridreach::ledger::Ledger;
use gridreach::token::token_reachable;

#[test]
fn random_blocks_keep_rim_reachability() {
    let mut checked = 0;
    for seed in 0..300u64 {
        let w = 2 + (seed % 7) as u32;
        let h = 2 + (seed / 7 % 7) as u32;
        let density = [0.3, 0.5, 0.7, 0.9][(seed % 4) as usize];
        let g = gen_random(w, h, density, seed).unwrap();
        let b = Block::new(0, 0, w - 1, h - 1);
        let c = build_circle(&g, b.rim(), InnerSolver::Bfs, &Ledger::disabled());
        let (gadget, _) = transform_with(&c, TransformOptions::default())
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let n = c.n();
        assert!(gadget.vertex_count() <= 6 * n);
        check_planar(&gadget, &embed_exact(&gadget))
            .unwrap_or_else(|e| panic!("seed {seed}: {e}\n{}", c.dump()));
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    assert_eq!(
                        token_reachable(&gadget, x as u32, y as u32),
                        c.has_edge(x, y),
                        "seed {seed} {w}x{h} pair ({x},{y})\n{}",
                        c.dump()
                    );
                }
            }
        }
        checked += 1;
    }
    assert_eq!(checked, 300);
}
