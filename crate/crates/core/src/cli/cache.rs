use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::mpcore::{ApproxReal, PrecisionContext, Radius};
use crate::{Error, Result};

/// Bumped whenever a cached constant would be computed differently.
pub const ALGORITHM_VERSION: u32 = 1;

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "MODVAL_CACHE_DIR";

/// Constant name plus the number of decimal digits it was computed to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub name: String,
    pub digits: u32,
}

impl CacheKey {
    pub fn new(name: &str, digits: u32) -> Result<Self> {
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::Cache(format!("invalid key name `{name}`")));
        }
        Ok(Self { name: name.to_string(), digits })
    }

    /// Parses `name@digits`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, d) = s.rsplit_once('@').ok_or_else(|| Error::Cache(format!("key `{s}` is not name@digits")))?;
        let digits = d.parse().map_err(|_| Error::Cache(format!("bad digit count in `{s}`")))?;
        Self::new(name, digits)
    }

    fn file_name(&self) -> String {
        format!("{}@{}.v{}.json", self.name, self.digits, ALGORITHM_VERSION)
    }
}

impl std::fmt::Display for CacheKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}@{}", self.name, self.digits)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    /// Decimal rendering to `key.digits` significant digits.
    pub value: String,
    /// Exact binary midpoint in base 16, when the entry holds a float.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default)]
    pub precision_bits: u32,
    /// Error radius in base 16.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<String>,
    pub algorithm_version: u32,
    pub created_unix: u64,
}

impl CacheEntry {
    pub fn new(key: CacheKey, value: String) -> Self {
        Self { key, value, exact: None, precision_bits: 0, radius: None, algorithm_version: ALGORITHM_VERSION, created_unix: now() }
    }

    pub fn from_real(key: CacheKey, x: &ApproxReal) -> Self {
        let mut e = Self::new(key.clone(), x.to_decimal(key.digits as usize));
        e.exact = Some(x.mid().to_string_radix(16, None));
        e.precision_bits = x.prec();
        e.radius = Some(x.rad().as_float().to_string_radix(16, None));
        e
    }

    /// The stored ball rounded to `prec` bits.
    pub fn to_real(&self, prec: u32) -> Result<ApproxReal> {
        let bad = || Error::Cache(format!("entry {} has no exact value", self.key));
        let exact = self.exact.as_deref().ok_or_else(bad)?;
        let rad = self.radius.as_deref().ok_or_else(bad)?;
        let parse = |s: &str, p: u32| -> Result<Float> {
            Float::parse_radix(s, 16)
                .map(|v| Float::with_val(p, v))
                .map_err(|e| Error::Cache(format!("entry {}: {e}", self.key)))
        };
        let mid = parse(exact, self.precision_bits.max(2))?;
        let rad = Radius::from_float(&parse(rad, 64)?);
        let mut x = ApproxReal::new(mid, rad);
        if prec < x.prec() {
            let mut m = x.mid().clone();
            m.set_prec(prec);
            let r = x.rad().add(&Radius::ulp(&m, prec));
            x = ApproxReal::new(m, r);
        }
        Ok(x)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStat {
    pub dir: String,
    pub entries: usize,
    pub stale: usize,
    pub bytes: u64,
}

/// On-disk store of computed constants, one JSON file per key.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Cache(format!("{}: {e}", path.display()))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$MODVAL_CACHE_DIR`, or `.cache/` under the working directory.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::new(d),
            _ => Self::new(".cache"),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Current-version entries for `name`, as (digits, path).
    fn candidates(&self, name: &str) -> Vec<(u32, PathBuf)> {
        let Ok(rd) = fs::read_dir(&self.dir) else { return Vec::new() };
        let suffix = format!(".v{ALGORITHM_VERSION}.json");
        let mut out: Vec<(u32, PathBuf)> = rd
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let f = e.file_name().into_string().ok()?;
                let stem = f.strip_suffix(&suffix)?;
                let (n, d) = stem.rsplit_once('@')?;
                (n == name).then(|| d.parse().ok().map(|d| (d, e.path())))?
            })
            .collect();
        out.sort();
        out
    }

    /// The entry with the fewest digits that still covers `key.digits`.
    /// Unreadable entries count as misses and are removed.
    pub fn get(&self, key: &CacheKey) -> Option<CacheEntry> {
        for (d, path) in self.candidates(&key.name) {
            if d < key.digits {
                continue;
            }
            let parsed = fs::read(&path).ok().and_then(|b| serde_json::from_slice::<CacheEntry>(&b).ok());
            match parsed {
                Some(e) if e.key.name == key.name && e.key.digits == d && e.algorithm_version == ALGORITHM_VERSION => {
                    return Some(e)
                }
                _ => {
                    let _ = fs::remove_file(&path);
                }
            }
        }
        None
    }

    /// Writes to a temporary file in the cache directory, then renames over the target.
    pub fn put(&self, entry: &CacheEntry) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        let target = self.dir.join(entry.key.file_name());
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}-{}",
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed),
            entry.key.file_name()
        ));
        let body = serde_json::to_vec_pretty(entry).map_err(|e| Error::Cache(e.to_string()))?;
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&body)?;
            f.sync_all()?;
            fs::rename(&tmp, &target)
        };
        write().map_err(|e| {
            let _ = fs::remove_file(&tmp);
            io_err(&target, e)
        })
    }

    /// Removes every entry; returns how many files were deleted.
    pub fn clear(&self) -> Result<usize> {
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(io_err(&self.dir, e)),
        };
        let mut n = 0;
        for e in rd.filter_map(|e| e.ok()) {
            let path = e.path();
            if path.is_file() && path.extension().is_some_and(|x| x == "json") || e.file_name().to_string_lossy().starts_with(".tmp-") {
                fs::remove_file(&path).map_err(|err| io_err(&path, err))?;
                n += 1;
            }
        }
        Ok(n)
    }

    pub fn stat(&self) -> Result<CacheStat> {
        let mut s = CacheStat { dir: self.dir.display().to_string(), ..Default::default() };
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(s),
            Err(e) => return Err(io_err(&self.dir, e)),
        };
        let suffix = format!(".v{ALGORITHM_VERSION}.json");
        for e in rd.filter_map(|e| e.ok()) {
            let f = e.file_name().to_string_lossy().into_owned();
            if !f.ends_with(".json") || f.starts_with(".tmp-") {
                continue;
            }
            s.bytes += e.metadata().map(|m| m.len()).unwrap_or(0);
            if f.ends_with(&suffix) {
                s.entries += 1;
            } else {
                s.stale += 1;
            }
        }
        Ok(s)
    }

    /// A real constant at `ctx`, read from the cache or computed and stored.
    /// Storage failures are ignored: the cache only saves time.
    pub fn real<F>(&self, name: &str, ctx: &PrecisionContext, compute: F) -> Result<ApproxReal>
    where
        F: FnOnce(&PrecisionContext) -> Result<ApproxReal>,
    {
        let key = CacheKey::new(name, ctx.decimal_digits())?;
        if let Some(e) = self.get(&key) {
            if let Ok(x) = e.to_real(ctx.prec()) {
                return Ok(x);
            }
        }
        let x = compute(ctx)?;
        let _ = self.put(&CacheEntry::from_real(key, &x));
        Ok(x)
    }
}
