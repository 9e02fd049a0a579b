//! Flat key-value scenario configs: one `key = value` (or `key value`) pair
//! per line, `#` comments. The `pipeline` key picks the handler; remaining
//! keys supply its inputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use opran::Error;

use crate::pipelines::{self, Env};

pub enum ScenarioError {
    UnknownPipeline(String),
    Config(String),
    Lib(Error),
}

impl From<Error> for ScenarioError {
    fn from(e: Error) -> Self {
        ScenarioError::Lib(e)
    }
}

fn parse_config(text: &str) -> Result<BTreeMap<String, String>, ScenarioError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => {
                    return Err(ScenarioError::Config(format!(
                        "line {}: expected `key = value`",
                        lineno + 1
                    )))
                }
            },
        };
        if key.is_empty() || value.is_empty() {
            return Err(ScenarioError::Config(format!(
                "line {}: empty key or value",
                lineno + 1
            )));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

struct Keys<'a> {
    map: &'a BTreeMap<String, String>,
    base: PathBuf,
}

impl<'a> Keys<'a> {
    fn get(&self, key: &str) -> Result<&str, ScenarioError> {
        self.map
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| ScenarioError::Config(format!("missing key `{key}`")))
    }

    fn path(&self, key: &str) -> Result<PathBuf, ScenarioError> {
        Ok(self.base.join(self.get(key)?))
    }

    fn f64(&self, key: &str) -> Result<f64, ScenarioError> {
        self.get(key)?
            .parse()
            .map_err(|_| ScenarioError::Config(format!("key `{key}` is not a number")))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize, ScenarioError> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| ScenarioError::Config(format!("key `{key}` is not an integer"))),
        }
    }

    fn str_or(&self, key: &str, default: &'a str) -> &str {
        self.map.get(key).map(String::as_str).unwrap_or(default)
    }
}

/// Execute the scenario at `path`; returns whether its checks passed.
pub fn run_scenario(env: &Env, path: &Path) -> Result<bool, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Lib(Error::Io(e)))?;
    let map = parse_config(&text)?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let keys = Keys { map: &map, base };
    // A config may pin its own seed and output directory.
    let seed = match map.get("seed") {
        None => env.seed,
        Some(v) => v
            .parse()
            .map_err(|_| ScenarioError::Config("key `seed` is not an integer".into()))?,
    };
    let out = map
        .get("out")
        .map(|o| keys.base.join(o))
        .unwrap_or_else(|| env.out.clone());
    let env = Env {
        ctx: env.ctx,
        seed,
        out,
    };
    let pipeline = keys.get("pipeline")?;
    let pass = match pipeline {
        "douglas" => pipelines::douglas(&env, &keys.path("a")?, &keys.path("b")?)?,
        "parsum" => pipelines::parsum(
            &env,
            &keys.path("f")?,
            &keys.path("g")?,
            keys.str_or("route", "all"),
        )?,
        "short" => pipelines::short(&env, &keys.path("b")?, &keys.path("k")?)?,
        "pxfamily" => {
            let xs = crate::parse::parse_f64_list(keys.str_or("xs", "0.5,1,2,4"))?;
            pipelines::pxfamily(&env, &keys.path("a")?, &keys.path("b")?, &xs)?
        }
        "chain" => pipelines::chain(
            &env,
            &keys.path("a")?,
            &keys.path("m")?,
            keys.usize_or("k", 20)?,
        )?,
        "liftcheck" => pipelines::liftcheck(&env, &keys.path("a")?, &keys.path("m")?)?,
        "liftsweep" => pipelines::liftsweep(
            &env,
            keys.f64("a")?,
            keys.f64("b")?,
            keys.str_or("ns", "8,16,32,64,128"),
        )?,
        "splitpair" => pipelines::splitpair(&env, &keys.path("t")?, &keys.path("m")?)?,
        "euler" => pipelines::euler(
            &env,
            &keys.path("t")?,
            keys.str_or("z", "1+0i"),
            keys.str_or("ns", "8..1024"),
        )?,
        "trotter" => {
            let t = match map.get("t") {
                None => 1.0,
                Some(v) => v
                    .parse()
                    .map_err(|_| ScenarioError::Config("key `t` is not a number".into()))?,
            };
            pipelines::trotter(
                &env,
                &keys.path("t1")?,
                &keys.path("t2")?,
                t,
                keys.str_or("ns", "2..256"),
            )?
        }
        "divext" => pipelines::divext(
            &env,
            &keys.path("l2")?,
            &keys.path("d")?,
            keys.usize_or("samples", 100)?,
        )?,
        "prodpair" => pipelines::prodpair(&env, &keys.path("b")?, &keys.path("m")?)?,
        other => return Err(ScenarioError::UnknownPipeline(other.to_string())),
    };
    Ok(pass)
}
