//! A few small crossed modules used throughout the tests and the CLI.

use crate::crossed_module::CrossedModule;
use crate::group::FiniteGroup;

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 4] = ["z2z4", "s3conj", "z2z3inv", "trivial"];

/// `(Z₂, Z₄, trivial ▷, ∂ = reduction mod 2)`.
pub fn z2_z4() -> CrossedModule {
    CrossedModule::from_parts(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), |_, h| h, |h| h % 2)
        .expect("z2z4 is a crossed module")
}

/// `(S₃, S₃, conjugation, ∂ = id)`.
pub fn s3_conjugation() -> CrossedModule {
    adjoint(FiniteGroup::symmetric(3))
}

/// `(Z₂, Z₃, inversion, ∂ trivial)`.
pub fn z2_z3_inversion() -> CrossedModule {
    CrossedModule::from_parts(
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        |g, h| if g == 0 { h } else { (3 - h) % 3 },
        |_| 0,
    )
    .expect("z2z3inv is a crossed module")
}

/// `(1, 1)`.
pub fn trivial() -> CrossedModule {
    with_trivial_h(FiniteGroup::trivial())
}

/// `(G, G, conjugation, id)`.
pub fn adjoint(g: FiniteGroup) -> CrossedModule {
    let h = g.clone();
    let conj = {
        let g = g.clone();
        move |x: usize, y: usize| g.mul(g.mul(x, y), g.inv(x))
    };
    CrossedModule::from_parts(g, h, conj, |y| y).expect("conjugation crossed module")
}

/// `(G, 1)`: an ordinary group viewed as a crossed module.
pub fn with_trivial_h(g: FiniteGroup) -> CrossedModule {
    let e = g.identity();
    CrossedModule::from_parts(g, FiniteGroup::trivial(), |_, h| h, move |_| e)
        .expect("trivial H gives a crossed module")
}

pub fn by_name(name: &str) -> Option<CrossedModule> {
    match name {
        "z2z4" => Some(z2_z4()),
        "s3conj" => Some(s3_conjugation()),
        "z2z3inv" => Some(z2_z3_inversion()),
        "trivial" => Some(trivial()),
        _ => None,
    }
}
