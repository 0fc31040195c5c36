//! Run configuration: flat `key=value` file, overridden by flags.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use qcplx::circuit::{basis_by_id, GateBasis, STANDARD_BASIS_ID};
use qcplx::compress::{compressor_by_id, Compressor, DEFAULT_COMPRESSOR};
use qcplx::encode::CODE_ONE_SYMBOL;
use qcplx::synth::{Compiler, SkParams};
use qcplx::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub basis: Option<String>,
    pub code: Option<String>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub compressor: Option<String>,
    pub sk_l0: Option<usize>,
    pub sk_depth: Option<usize>,
}

impl Overrides {
    fn or(self, base: Overrides) -> Overrides {
        Overrides {
            basis: self.basis.or(base.basis),
            code: self.code.or(base.code),
            epsilon: self.epsilon.or(base.epsilon),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            compressor: self.compressor.or(base.compressor),
            sk_l0: self.sk_l0.or(base.sk_l0),
            sk_depth: self.sk_depth.or(base.sk_depth),
        }
    }

    pub fn parse_file(text: &str) -> Result<Overrides> {
        let mut o = Overrides::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |m: String| Error::Parse {
                line: i + 1,
                message: m,
            };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| perr(format!("expected key=value, got `{line}`")))?;
            let bad = || perr(format!("bad value for `{key}`: `{value}`"));
            match key {
                "basis" => o.basis = Some(value.into()),
                "code" => o.code = Some(value.into()),
                "epsilon" => o.epsilon = Some(value.parse().map_err(|_| bad())?),
                "seed" => o.seed = Some(value.parse().map_err(|_| bad())?),
                "out" => o.out = Some(value.into()),
                "compressor" => o.compressor = Some(value.into()),
                "sk_l0" => o.sk_l0 = Some(value.parse().map_err(|_| bad())?),
                "sk_depth" => o.sk_depth = Some(value.parse().map_err(|_| bad())?),
                _ => return Err(perr(format!("unknown key `{key}`"))),
            }
        }
        Ok(o)
    }
}

pub struct RunConfig {
    pub basis: Arc<GateBasis>,
    pub code: String,
    pub epsilon: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub compressor: Box<dyn Compressor>,
    pub sk: SkParams,
}

impl RunConfig {
    /// Flags, then the config file, then defaults.
    pub fn resolve(flags: Overrides, file: Option<&Path>) -> Result<RunConfig> {
        let from_file = match file {
            Some(p) => Overrides::parse_file(&read(p)?)?,
            None => Overrides::default(),
        };
        let o = flags.or(from_file);
        let epsilon = o.epsilon.unwrap_or(0.01);
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Precision(epsilon));
        }
        let defaults = SkParams::default();
        let code = o.code.unwrap_or_else(|| CODE_ONE_SYMBOL.into());
        let basis = basis_by_id(o.basis.as_deref().unwrap_or(STANDARD_BASIS_ID))?;
        qcplx::encode::Code::by_id(&code, basis.id())?;
        Ok(RunConfig {
            basis,
            code,
            epsilon,
            seed: o.seed.unwrap_or(0),
            out: o.out.unwrap_or_else(|| PathBuf::from(".")),
            compressor: compressor_by_id(o.compressor.as_deref().unwrap_or(DEFAULT_COMPRESSOR))?,
            sk: SkParams {
                l0: o.sk_l0.unwrap_or(defaults.l0),
                depth: o.sk_depth.unwrap_or(qcplx::synth::DEFAULT_MAX_DEPTH),
                ..defaults
            },
        })
    }

    /// The shared default compiler when the settings match it, otherwise a
    /// fresh net.
    pub fn compiler(&self) -> Result<Arc<Compiler>> {
        let std = Compiler::standard();
        if self.basis.id() == std.basis().id()
            && self.sk.l0 == std.net().l0()
            && self.sk.depth == std.max_depth()
        {
            return Ok(std);
        }
        Ok(Arc::new(Compiler::from_params(self.basis.clone(), &self.sk)?))
    }

    pub fn out_path(&self, name: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out).map_err(|e| io_error(&self.out, e))?;
        Ok(self.out.join(name))
    }
}

pub fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Domain(format!("{}: {e}", path.display()))
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| io_error(path, e))
}
