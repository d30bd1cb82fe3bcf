//! Executable quantum authentication protocols and the protocol registry.
//!
//! Six protocols run on the simulator; four more are registry entries with
//! declared model and complexity only (their internals -- purity-testing
//! codes, Goppa decoding, catalysis transformations, trusted-center key
//! distribution -- are out of scope here).

use serde::Serialize;
use thiserror::Error;

use crate::channel::{ChannelError, PartyId, Session};
use crate::ledger::{AuthTask, ComplexityExpr, ModelClass};
use crate::rng::SimRng;

mod curty_santos;
mod kanamori;
mod li_barnum;
mod li_zhang;
mod zeng_guo;
mod zhang_li_guo;

pub use curty_santos::run_curty_santos;
pub use kanamori::run_kanamori;
pub use li_barnum::run_li_barnum;
pub use li_zhang::run_li_zhang;
pub use zeng_guo::run_zeng_guo;
pub use zhang_li_guo::{run_zhang_li_guo, run_zhang_li_guo_with_pairs};

/// Angle keys are quantized to this many levels in `[0, pi)` so runs
/// serialize reproducibly.
pub const KEY_LEVELS: u32 = 1024;

/// Draw one quantized key angle in `[0, pi)`.
pub fn random_angle(rng: &mut SimRng) -> f64 {
    use rand::Rng;
    let level = rng.gen_range(0..KEY_LEVELS);
    level as f64 * std::f64::consts::PI / KEY_LEVELS as f64
}

pub fn random_bits(rng: &mut SimRng, count: usize) -> Vec<bool> {
    use rand::Rng;
    (0..count).map(|_| rng.gen::<bool>()).collect()
}

/// Shared authentication key material.
#[derive(Debug, Clone, PartialEq)]
pub enum AuthKey {
    /// One angle per qubit, each in `[0, pi)`.
    AngleKey(Vec<f64>),
    BitKey(Vec<bool>),
    /// A single shared angle.
    Theta(f64),
}

impl AuthKey {
    pub fn random_angles(rng: &mut SimRng, n: usize) -> AuthKey {
        AuthKey::AngleKey((0..n).map(|_| random_angle(rng)).collect())
    }
}

/// Result of one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub accepted: bool,
    pub eavesdrop_detected: bool,
    /// Recovered message bits (data-origin protocols only).
    pub recovered_message: Option<Vec<bool>>,
    /// Session key angles, where the protocol generates one.
    pub session_key: Option<Vec<f64>>,
}

impl Outcome {
    fn identity(accepted: bool) -> Outcome {
        Outcome {
            accepted,
            eavesdrop_detected: !accepted,
            recovered_message: None,
            session_key: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("unknown protocol id `{0}`")]
    UnknownProtocol(String),
    #[error("protocol `{0}` has no executable form; only declared values are available")]
    NotSimulable(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("pair budget exceeded: n = {n} but only k = {k} pairs per direction")]
    Budget { n: usize, k: usize },
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Registry metadata for one protocol.
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolSpec {
    pub id: &'static str,
    pub kind: AuthTask,
    pub declared_model: ModelClass,
    pub declared_complexity: ComplexityExpr,
    pub simulable: bool,
    pub citation: &'static str,
}

/// All ten protocols, in registry order.
pub fn registry() -> Vec<ProtocolSpec> {
    vec![
        ProtocolSpec {
            id: "barnum_purity",
            kind: AuthTask::DataOrigin,
            declared_model: ModelClass::Yao,
            declared_complexity: ComplexityExpr::exact(1, 1, 0),
            simulable: false,
            citation: "Barnum, Crepeau, Gottesman, Smith, Tapp: purity-testing-code message authentication",
        },
        ProtocolSpec {
            id: "yang_goppa",
            kind: AuthTask::DataOrigin,
            declared_model: ModelClass::Yao,
            declared_complexity: ComplexityExpr::exact(0, 2, 0),
            simulable: false,
            citation: "Yang et al.: Goppa-code message authentication",
        },
        ProtocolSpec {
            id: "curty_santos",
            kind: AuthTask::DataOrigin,
            declared_model: ModelClass::Hybrid,
            declared_complexity: ComplexityExpr::exact(0, 2, 0),
            simulable: true,
            citation: "Curty, Santos: authentication of classical messages over a shared singlet",
        },
        ProtocolSpec {
            id: "li_zhang",
            kind: AuthTask::DataOrigin,
            declared_model: ModelClass::Hybrid,
            declared_complexity: ComplexityExpr::exact(0, 2, 0),
            simulable: true,
            citation: "Li, Zhang: message authentication with previously shared EPR pairs",
        },
        ProtocolSpec {
            id: "kanamori",
            kind: AuthTask::Identity,
            declared_model: ModelClass::Yao,
            declared_complexity: ComplexityExpr::exact(3, 0, 0),
            simulable: true,
            citation: "Kanamori et al.: identity authentication via rotation-encrypted superpositions",
        },
        ProtocolSpec {
            id: "zeng_guo",
            kind: AuthTask::Identity,
            declared_model: ModelClass::CleveBuhrman,
            declared_complexity: ComplexityExpr::lower_bound(2, 0, 0),
            simulable: true,
            citation: "Zeng, Guo: mutual identity authentication over shared EPR pairs and classical ciphers",
        },
        ProtocolSpec {
            id: "li_barnum",
            kind: AuthTask::Identity,
            declared_model: ModelClass::Hybrid,
            declared_complexity: ComplexityExpr::exact(2, 0, 0),
            simulable: true,
            citation: "Li, Barnum: EPR pairs as identification tokens, verified by Bell measurement",
        },
        ProtocolSpec {
            id: "zhang_li_guo",
            kind: AuthTask::Identity,
            declared_model: ModelClass::Hybrid,
            declared_complexity: ComplexityExpr::exact(2, 0, 0),
            simulable: true,
            citation: "Zhang, Li, Guo: identity authentication with rotated EPR pairs and CNOT echoes",
        },
        ProtocolSpec {
            id: "barnum_catalysis",
            kind: AuthTask::Identity,
            declared_model: ModelClass::Hybrid,
            declared_complexity: ComplexityExpr::lower_bound(1, 0, 0),
            simulable: false,
            citation: "Barnum: identity authentication via entanglement catalysis",
        },
        ProtocolSpec {
            id: "zeng_zhang",
            kind: AuthTask::Identity,
            declared_model: ModelClass::Hybrid,
            declared_complexity: ComplexityExpr::lower_bound(4, 0, 0),
            simulable: false,
            citation: "Zeng, Zhang: trusted-center identity verification with session key agreement",
        },
    ]
}

pub fn find_spec(id: &str) -> Result<ProtocolSpec, ProtocolError> {
    registry()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| ProtocolError::UnknownProtocol(id.to_string()))
}

/// Sizes and inputs for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    /// Key / security-parameter size.
    pub n: usize,
    /// Message size (data-origin protocols).
    pub m: usize,
    /// Extra security parameter (Zeng-Guo check bits).
    pub s: usize,
    /// Pair budget per direction (Zhang-Li-Guo); defaults to `n`.
    pub k: Option<usize>,
    /// Message bits; random when absent.
    pub message: Option<Vec<bool>>,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            n: 8,
            m: 8,
            s: 4,
            k: None,
            message: None,
        }
    }
}

impl RunParams {
    pub fn size(n: usize, m: usize) -> Self {
        RunParams {
            n,
            m,
            ..Default::default()
        }
    }
}

/// Open a session, install the adversary, and run one simulable protocol.
///
/// Returns the outcome together with the session so callers can inspect
/// the event log and residual quantum state.
pub fn run_simulable(
    id: &str,
    params: &RunParams,
    adversary: crate::adversary::AdversaryKind,
    seed: u64,
) -> Result<(Outcome, Session), ProtocolError> {
    let spec = find_spec(id)?;
    if !spec.simulable {
        return Err(ProtocolError::NotSimulable(id.to_string()));
    }
    if matches!(adversary, crate::adversary::AdversaryKind::Impersonation(_))
        && spec.kind == AuthTask::DataOrigin
    {
        return Err(ProtocolError::Config(format!(
            "impersonation targets identity protocols; `{id}` authenticates data origin"
        )));
    }
    let mut session = Session::open(&[PartyId::Alice, PartyId::Bob], seed)?;
    session.install_adversary(adversary)?;
    let message = |p: &RunParams, rng: &mut SimRng| -> Vec<bool> {
        p.message
            .clone()
            .unwrap_or_else(|| random_bits(rng, p.m))
    };
    let outcome = match id {
        "kanamori" => {
            let key = AuthKey::random_angles(session.rng_mut(), params.n);
            run_kanamori(&mut session, params.n, &key)?
        }
        "zhang_li_guo" => {
            let theta = AuthKey::Theta(random_angle(session.rng_mut()));
            let k = params.k.unwrap_or(params.n);
            run_zhang_li_guo(&mut session, params.n, k, &theta)?
        }
        "li_barnum" => run_li_barnum(&mut session, params.n)?,
        "li_zhang" => {
            let msg = message(params, session.rng_mut());
            run_li_zhang(&mut session, &msg)?
        }
        "curty_santos" => {
            let msg = message(params, session.rng_mut());
            run_curty_santos(&mut session, &msg)?
        }
        "zeng_guo" => run_zeng_guo(&mut session, params.n, params.s)?,
        _ => unreachable!("simulable ids are exhaustive"),
    };
    Ok((outcome, session))
}
