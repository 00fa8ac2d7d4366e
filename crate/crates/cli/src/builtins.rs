//! Named scenarios bundled with the tool.

use pubmarket::models::{
    canonical_publishing_instantiation, default_constraints, habermann_game, hanauske_game,
    publishing_game_3x3, publishing_symbolic_3x3, BesancenotParams, HabermannParams,
    HanauskeParams,
};
use pubmarket::rat;

use crate::scenario::{
    concrete_scenario, symbolic_scenario, DynamicsOptions, GameSpec, IedsKind, IedsOption,
    IedsOrder, Options, ScenarioFile, SCENARIO_SCHEMA_VERSION,
};

pub const BUILTIN_NAMES: [&str; 6] = [
    "publishing_canonical",
    "publishing_symbolic",
    "hanauske_pd",
    "hanauske_staghunt",
    "habermann_default",
    "besancenot_default",
];

fn weak_row_first() -> Option<IedsOption> {
    Some(IedsOption {
        kind: IedsKind::Weak,
        order: IedsOrder::RowFirst,
    })
}

pub fn default_besancenot() -> BesancenotParams {
    BesancenotParams {
        mu: rat(3, 10),
        theta_h: rat(2, 1),
        theta_l: rat(1, 1),
        lambda_w: rat(1, 4),
        delta_a: rat(2, 1),
        delta_t: rat(1, 1),
        c: rat(1, 2),
        phi: rat(1, 2),
        belief_a: Some(rat(2, 1)),
        belief_t: Some(rat(1, 1)),
    }
}

pub fn default_habermann() -> HabermannParams {
    HabermannParams::from_integers(10, 2, 5, 1, 2, 3, 4)
}

pub fn builtin(name: &str) -> Option<ScenarioFile> {
    let scenario = match name {
        "publishing_canonical" => {
            let game = publishing_game_3x3(&canonical_publishing_instantiation())
                .expect("canonical values");
            concrete_scenario(
                name,
                &game,
                Options {
                    ieds: weak_row_first(),
                    dynamics: Some(DynamicsOptions {
                        init: Some([rat(1, 3), rat(1, 3), rat(1, 3)]),
                        herd_weight: Some(rat(0, 1)),
                        steps: Some(1000),
                        ..Default::default()
                    }),
                    ..Default::default()
                },
            )
        }
        "publishing_symbolic" => symbolic_scenario(
            name,
            &publishing_symbolic_3x3(),
            &default_constraints(false),
            Options {
                ieds: weak_row_first(),
                nonnegativity: Some(true),
                ..Default::default()
            },
        ),
        "hanauske_pd" | "hanauske_staghunt" => {
            let (beta, delta) = if name == "hanauske_pd" {
                (2, 1)
            } else {
                (1, 2)
            };
            let params = HanauskeParams::new(rat(4, 1), rat(1, 1), rat(beta, 1), rat(delta, 1));
            concrete_scenario(
                name,
                &hanauske_game(&params).expect("valid"),
                Options::default(),
            )
        }
        "habermann_default" => concrete_scenario(
            name,
            &habermann_game(&default_habermann()).expect("valid"),
            Options {
                dynamics: Some(DynamicsOptions {
                    start: Some(["s1".into(), "p1".into()]),
                    ..Default::default()
                }),
                ..Default::default()
            },
        ),
        "besancenot_default" => ScenarioFile {
            schema_version: SCENARIO_SCHEMA_VERSION,
            name: name.to_string(),
            game: GameSpec::Besancenot {
                params: default_besancenot(),
            },
            options: Options::default(),
        },
        _ => return None,
    };
    Some(scenario)
}
