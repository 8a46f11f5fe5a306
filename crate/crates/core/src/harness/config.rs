//! Scenario configuration and validation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channels::ChannelSpec;
use crate::error::{Error, Result};
use crate::hqis::Receiver;
use crate::hqss::{AdversaryModel, AGENT_SEQUENCES};

/// Which engine a scenario drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    HqisPerfect,
    HqisProbabilistic,
    Hqss,
    AttackStudy,
    VerifyTables,
    VerifyEncryption,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::HqisPerfect => "hqis-perfect",
            Protocol::HqisProbabilistic => "hqis-probabilistic",
            Protocol::Hqss => "hqss",
            Protocol::AttackStudy => "attack-study",
            Protocol::VerifyTables => "verify-tables",
            Protocol::VerifyEncryption => "verify-encryption",
        }
    }
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hqis-perfect" => Ok(Protocol::HqisPerfect),
            "hqis-probabilistic" => Ok(Protocol::HqisProbabilistic),
            "hqss" => Ok(Protocol::Hqss),
            "attack-study" => Ok(Protocol::AttackStudy),
            "verify-tables" => Ok(Protocol::VerifyTables),
            "verify-encryption" => Ok(Protocol::VerifyEncryption),
            other => Err(Error::invalid_config(
                "protocol",
                format!("unknown protocol `{other}`"),
            )),
        }
    }
}

/// A fixed secret parameter or a fresh draw per trial (Re and Im uniform
/// in [-2, 2]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaChoice {
    Fixed { re: f64, im: f64 },
    Keyword(String),
}

impl LambdaChoice {
    pub fn random() -> Self {
        LambdaChoice::Keyword("random".to_string())
    }

    pub fn fixed(re: f64, im: f64) -> Self {
        LambdaChoice::Fixed { re, im }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, LambdaChoice::Keyword(_))
    }

    pub fn fixed_value(&self) -> Option<Complex64> {
        match self {
            LambdaChoice::Fixed { re, im } => Some(Complex64::new(*re, *im)),
            LambdaChoice::Keyword(_) => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            LambdaChoice::Fixed { re, im } => {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::invalid_config("lambda", "lambda must be finite"));
                }
                Ok(())
            }
            LambdaChoice::Keyword(k) if k == "random" => Ok(()),
            LambdaChoice::Keyword(k) => Err(Error::invalid_config(
                "lambda",
                format!("expected {{re, im}} or \"random\", got \"{k}\""),
            )),
        }
    }
}

/// Adversary selection; intercept probability rides in a separate field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryKind {
    None,
    InterceptResend,
    DishonestBob,
}

impl std::str::FromStr for AdversaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(AdversaryKind::None),
            "intercept-resend" => Ok(AdversaryKind::InterceptResend),
            "dishonest-bob" => Ok(AdversaryKind::DishonestBob),
            other => Err(Error::invalid_config(
                "adversary",
                format!("unknown adversary `{other}`"),
            )),
        }
    }
}

fn default_lambda() -> LambdaChoice {
    LambdaChoice::random()
}

fn default_adversary() -> AdversaryKind {
    AdversaryKind::None
}

fn default_trials() -> u64 {
    1000
}

/// One reproducible scenario: protocol, inputs, trial count and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub protocol: Protocol,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receiver: Option<Receiver>,
    #[serde(default = "default_lambda")]
    pub lambda: LambdaChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default = "default_adversary")]
    pub adversary: AdversaryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intercept_prob: Option<f64>,
    #[serde(default)]
    pub threshold: f64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn new(protocol: Protocol) -> Self {
        ScenarioConfig {
            protocol,
            channel: None,
            receiver: None,
            lambda: default_lambda(),
            a: None,
            b: None,
            n: None,
            adversary: default_adversary(),
            intercept_prob: None,
            threshold: 0.0,
            trials: default_trials(),
            seed: 0,
        }
    }

    pub fn receiver_or_default(&self) -> Receiver {
        self.receiver.unwrap_or(Receiver::Diana)
    }

    pub fn copies_or_default(&self) -> usize {
        self.n.unwrap_or(1)
    }

    /// Channel coefficients for the probabilistic protocol: taken from the
    /// a/b fields (or an explicit omega-prime channel), checked to
    /// a^2 + b^2 = 1 within 1e-9, then renormalized exactly.
    pub fn probabilistic_coefficients(&self) -> Result<(f64, f64)> {
        let (a, b) = match (self.a, self.b, &self.channel) {
            (Some(a), Some(b), _) => (a, b),
            (None, None, Some(ChannelSpec::OmegaPrime { a, b })) => (*a, *b),
            (None, None, None) => {
                return Err(Error::invalid_config(
                    "a",
                    "hqis-probabilistic requires --a and --b",
                ))
            }
            _ => {
                return Err(Error::invalid_config(
                    "a",
                    "provide both a and b (or neither)",
                ))
            }
        };
        let norm_sq = a * a + b * b;
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > 1e-9 {
            return Err(Error::invalid_config(
                "a",
                format!("a^2 + b^2 = {norm_sq} must equal 1 within 1e-9"),
            ));
        }
        let scale = norm_sq.sqrt();
        let (a, b) = (a / scale, b / scale);
        if b <= 0.0 || b > a {
            return Err(Error::invalid_config(
                "b",
                "coefficients must satisfy a >= b > 0",
            ));
        }
        Ok((a, b))
    }

    /// The channel this scenario actually runs over.
    pub fn effective_channel(&self) -> Result<ChannelSpec> {
        match self.protocol {
            Protocol::HqisPerfect | Protocol::VerifyEncryption => {
                let channel = self.channel.clone().unwrap_or(ChannelSpec::Omega);
                if !channel.is_maximal_four_qubit() {
                    return Err(Error::invalid_config(
                        "channel",
                        format!("{} requires omega or cluster4", self.protocol.name()),
                    ));
                }
                Ok(channel)
            }
            Protocol::Hqss | Protocol::AttackStudy => {
                let channel = self.channel.clone().unwrap_or(ChannelSpec::Omega);
                if channel != ChannelSpec::Omega {
                    return Err(Error::invalid_config(
                        "channel",
                        "the secret-sharing session runs over the omega channel",
                    ));
                }
                Ok(channel)
            }
            Protocol::HqisProbabilistic => {
                let (a, b) = self.probabilistic_coefficients()?;
                Ok(ChannelSpec::OmegaPrime { a, b })
            }
            Protocol::VerifyTables => Ok(ChannelSpec::Omega),
        }
    }

    pub fn adversary_model(&self) -> Result<AdversaryModel> {
        match self.adversary {
            AdversaryKind::None => Ok(AdversaryModel::None),
            AdversaryKind::InterceptResend => {
                let probability = self.intercept_prob.unwrap_or(1.0);
                if !(0.0..=1.0).contains(&probability) {
                    return Err(Error::invalid_config(
                        "intercept-prob",
                        "probability must be in [0, 1]",
                    ));
                }
                Ok(AdversaryModel::InterceptResend {
                    sequences: AGENT_SEQUENCES.to_vec(),
                    probability,
                })
            }
            AdversaryKind::DishonestBob => Ok(AdversaryModel::DishonestBobCapture),
        }
    }

    /// Field-level consistency checks; rejected configs never reach an engine.
    pub fn validate(&self) -> Result<()> {
        self.lambda.validate()?;
        if self.trials == 0 {
            return Err(Error::invalid_config("trials", "must be positive"));
        }
        if let Some(channel) = &self.channel {
            channel
                .validate()
                .map_err(|e| Error::invalid_config("channel", e.to_string()))?;
        }

        let probabilistic = self.protocol == Protocol::HqisProbabilistic;
        if (self.a.is_some() || self.b.is_some()) && !probabilistic {
            return Err(Error::invalid_config(
                "a",
                "a/b apply only to hqis-probabilistic",
            ));
        }
        let takes_copies = matches!(self.protocol, Protocol::Hqss | Protocol::AttackStudy);
        if self.n.is_some() && !takes_copies {
            return Err(Error::invalid_config(
                "n",
                "copy count applies only to hqss and attack-study",
            ));
        }
        if let Some(n) = self.n {
            if !(1..=3).contains(&n) {
                return Err(Error::invalid_config("n", "copy count must be 1..=3"));
            }
        }
        if self.adversary != AdversaryKind::None && self.protocol != Protocol::Hqss {
            return Err(Error::invalid_config(
                "adversary",
                "adversaries apply only to hqss (attack-study runs its own)",
            ));
        }
        if self.intercept_prob.is_some() && self.adversary != AdversaryKind::InterceptResend {
            return Err(Error::invalid_config(
                "intercept-prob",
                "only meaningful with adversary = intercept-resend",
            ));
        }
        if self.threshold != 0.0 && self.protocol != Protocol::Hqss {
            return Err(Error::invalid_config(
                "threshold",
                "abort threshold applies only to hqss",
            ));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::invalid_config("threshold", "must be in [0, 1]"));
        }
        match self.protocol {
            Protocol::HqisPerfect | Protocol::Hqss | Protocol::AttackStudy => {
                let _ = self.effective_channel()?;
            }
            Protocol::HqisProbabilistic => {
                let _ = self.probabilistic_coefficients()?;
                let receiver = self.receiver_or_default();
                if receiver == Receiver::Charlie {
                    return Err(Error::invalid_config(
                        "receiver",
                        "probabilistic receivers are diana or bob",
                    ));
                }
            }
            Protocol::VerifyEncryption => {
                let _ = self.effective_channel()?;
                if self.receiver.is_some() {
                    return Err(Error::invalid_config(
                        "receiver",
                        "verify-encryption fixes the receiver by channel",
                    ));
                }
            }
            Protocol::VerifyTables => {
                if self.channel.is_some() || self.receiver.is_some() {
                    return Err(Error::invalid_config(
                        "channel",
                        "verify-tables takes no channel or receiver",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Canonical JSON used for hashing and provenance.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
