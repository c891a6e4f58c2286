#![allow(dead_code)]

use std::sync::Arc;

use ionad::fincat::FinCategory;
use ionad::ionad::Ionad;
use ionad::space::{alexandroff, equivariant, sigma, spatial_basis, FinTopSpace, GroupAction};

pub fn sierpinski() -> Ionad {
    sigma(&FinTopSpace::sierpinski())
}

/// The nonempty opens {0}, {1}, {0,1} of the discrete two-point space.
pub fn diamond() -> Ionad {
    let space = FinTopSpace::discrete(2);
    Ionad::new(spatial_basis(&space, &[0b01, 0b10, 0b11])).unwrap()
}

pub fn swap_action() -> GroupAction {
    GroupAction::new(
        Arc::new(FinCategory::cyclic_group(2)),
        FinTopSpace::discrete(2),
        vec![vec![0, 1], vec![1, 0]],
    )
    .unwrap()
}

/// Z/2 acting on small spaces: swap on the discrete and indiscrete two-point
/// spaces, and trivially on the Sierpiński space.
pub fn z2_actions() -> Vec<GroupAction> {
    let z2 = Arc::new(FinCategory::cyclic_group(2));
    vec![
        swap_action(),
        GroupAction::new(z2.clone(), FinTopSpace::indiscrete(2), vec![vec![0, 1], vec![1, 0]]).unwrap(),
        GroupAction::new(z2, FinTopSpace::sierpinski(), vec![vec![0, 1], vec![0, 1]]).unwrap(),
    ]
}

/// The idempotent monoid `{1, e}` with `e e = e`.
pub fn idempotent_monoid() -> FinCategory {
    FinCategory::monoid(&[vec![0, 1], vec![1, 1]]).unwrap()
}

/// A three-point space whose opens do not form a chain.
pub fn vee_space() -> FinTopSpace {
    FinTopSpace::new(3, [0b000, 0b001, 0b010, 0b011, 0b111]).unwrap()
}

/// Named ionads used across the test suites.
pub fn corpus() -> Vec<(&'static str, Ionad)> {
    vec![
        ("terminal", Ionad::terminal()),
        ("sierpinski", sierpinski()),
        ("discrete-2", sigma(&FinTopSpace::discrete(2))),
        ("indiscrete-2", sigma(&FinTopSpace::indiscrete(2))),
        ("vee-3", sigma(&vee_space())),
        ("diamond", diamond()),
        ("alexandroff-arrow", alexandroff(&FinCategory::arrow())),
        ("alexandroff-z2", alexandroff(&FinCategory::cyclic_group(2))),
        ("alexandroff-idempotent", alexandroff(&idempotent_monoid())),
        ("equivariant-swap", equivariant(&swap_action())),
    ]
}
