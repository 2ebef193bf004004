//! Scenario names, descriptions and default parameters.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Real number; accepts a trailing `pi` factor.
    Number,
    /// Comma-separated numbers.
    List,
    /// Non-negative integer.
    Count,
    /// One of a fixed set of words.
    Choice(&'static [&'static str]),
    /// Free text (paths).
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Param {
    pub key: &'static str,
    pub default: &'static str,
    pub kind: Kind,
    pub help: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub params: Vec<Param>,
}

impl ScenarioSpec {
    pub fn param(&self, key: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.key == key)
    }
}

const fn p(key: &'static str, default: &'static str, kind: Kind, help: &'static str) -> Param {
    Param {
        key,
        default,
        kind,
        help,
    }
}

const OUTPUT: Param = p("output", "output", Kind::Text, "directory for result.csv and meta.txt");
const DT: Param = p("dt", "0.01", Kind::Number, "quadrature and series step");
const CUTOFF: Param = p("cutoff", "3", Kind::Count, "largest photon number counted");
const RELEASES: &[&str] = &["gaussian", "exponential", "constant"];

pub fn registry() -> Vec<ScenarioSpec> {
    use Kind::*;
    vec![
        ScenarioSpec {
            name: "beam_splitter",
            description: "pi-pulsed emitter with the reflected drive cancelled on a beam splitter",
            params: vec![
                p("alpha0", "5,10", List, "drive amplitudes, one row each"),
                p("r", "0.995", Number, "beam-splitter reflection coefficient"),
                p("gamma_eff", "1", Number, "coupling at phi = 0"),
                p("delta", "0", Number, "detuning"),
                p("t0", "1", Number, "pulse start and window start"),
                p("T", "20", Number, "window end"),
                p("beta_amplitude_error", "0", Number, "relative amplitude error of the cancelling field"),
                p("beta_phase_error", "0", Number, "phase error of the cancelling field"),
                CUTOFF,
                DT,
                OUTPUT,
            ],
        },
        ScenarioSpec {
            name: "shaped_release",
            description: "excite at phi_i, store at phi = pi, release through a shaped phi(t) ramp",
            params: vec![
                p("alpha0", "5", Number, "drive amplitude"),
                p("gamma", "1", Number, "full-line coupling"),
                p("delta", "0", Number, "detuning"),
                p("phi_i", "0.9pi", Number, "phase during the pulse"),
                p("t0", "1", Number, "pulse start"),
                p("t_r", "8", Number, "release time"),
                p("T", "20", Number, "window end"),
                p("release", "gaussian", Choice(RELEASES), "target packet or constant phase"),
                p("packet_center", "4", Number, "gaussian center after t_r"),
                p("packet_sigma", "1", Number, "gaussian width"),
                p("kappa", "1", Number, "exponential packet rate"),
                p("phi_r", "0.5pi", Number, "phase for release=constant"),
                p("clip_budget", "0.01", Number, "allowed clipped share of the packet"),
                CUTOFF,
                DT,
                OUTPUT,
            ],
        },
        ScenarioSpec {
            name: "cascade_sweep",
            description: "pair correlation metric V of the three-level cascade over alpha_d and gamma02",
            params: vec![
                p("alpha_d", "5,6.25,7.5,8.75,10", List, "drive amplitudes"),
                p("gamma02", "0.05,0.1625,0.275,0.3875,0.5", List, "0-2 couplings"),
                p("gamma01", "1", Number, "0-1 coupling"),
                p("gamma12", "2", Number, "1-2 coupling"),
                p("delta", "0", Number, "0-2 detuning"),
                p("t0", "1", Number, "pulse start and window start"),
                p("T", "40", Number, "window end"),
                OUTPUT,
            ],
        },
        ScenarioSpec {
            name: "nr_sweep",
            description: "beam-splitter source with extra non-radiative decay",
            params: vec![
                p("gamma_nr", "0,0.05,0.1,0.2,0.5,1", List, "non-radiative rates"),
                p("alpha0", "10", Number, "drive amplitude"),
                p("r", "0.995", Number, "beam-splitter reflection coefficient"),
                p("gamma_eff", "1", Number, "coupling at phi = 0"),
                p("t0", "1", Number, "pulse start and window start"),
                p("T", "20", Number, "window end"),
                CUTOFF,
                DT,
                OUTPUT,
            ],
        },
        ScenarioSpec {
            name: "wait_sweep",
            description: "stored excitation lost to non-radiative decay before release",
            params: vec![
                p("t_wait", "0,1,2,3,4,5", List, "delay between pulse end and release"),
                p("alpha0", "10", Number, "drive amplitude"),
                p("gamma", "1", Number, "full-line coupling"),
                p("gamma_nr", "0.1", Number, "non-radiative rate"),
                p("phi_i", "0.9pi", Number, "phase during the pulse"),
                p("phi_r", "0.5pi", Number, "release phase"),
                p("t0", "1", Number, "pulse start"),
                p("window", "12", Number, "counting window after release"),
                CUTOFF,
                DT,
                OUTPUT,
            ],
        },
        ScenarioSpec {
            name: "encode",
            description: "square pulse writing cos(theta/2)|0> + e^{i azimuth} sin(theta/2)|1>",
            params: vec![
                p("theta", "0.5pi", Number, "polar angle of the target"),
                p("azimuth", "0", Number, "relative phase of the target"),
                p("gamma", "1", Number, "full-line coupling"),
                p("phi", "0.99pi", Number, "phase held during the pulse"),
                p("rabi_max", "20", Number, "largest Rabi frequency searched"),
                p("anharmonicity", "50", Number, "guard threshold for the Rabi frequency"),
                OUTPUT,
            ],
        },
        ScenarioSpec {
            name: "cancel_budget",
            description: "residual of two-path coherent cancellation and the error budget of given levels",
            params: vec![
                p("a1", "1", Number, "amplitude of path 1"),
                p("a2", "1", Number, "amplitude of path 2"),
                p("phi1", "0", Number, "phase of path 1"),
                p("phi2", "1pi", Number, "phase of path 2"),
                p("omega1", "0", Number, "angular frequency of path 1"),
                p("omega2", "0", Number, "angular frequency of path 2"),
                p("phi", "0", Number, "mirror round-trip phase"),
                p("tau1", "1", Number, "transmission of path 1"),
                p("tau2", "1", Number, "transmission of path 2"),
                p("n", "1", Count, "branch index of the phase condition"),
                p("budget_db", "-34,-50", List, "residual levels to convert into error budgets"),
                OUTPUT,
            ],
        },
    ]
}

pub fn find(name: &str) -> Option<ScenarioSpec> {
    registry().into_iter().find(|s| s.name == name)
}

/// Plain-text listing: name, description and defaults.
pub fn list_text() -> String {
    let mut out = String::new();
    for spec in registry() {
        out.push_str(&format!("{:<15} {}\n", spec.name, spec.description));
        for p in &spec.params {
            let assignment = format!("{} = {}", p.key, p.default);
            out.push_str(&format!("    {assignment:<40} # {}\n", p.help));
        }
    }
    out
}

pub fn list_json() -> String {
    serde_json::to_string_pretty(&registry()).expect("registry serializes")
}
