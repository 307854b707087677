//! Plain-text coefficient cache: a header line `k N digest`, then a_1..a_N.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use cuspsum_core::{CuspForm, IntSeries, Recipe};
use rug::Integer;

use crate::CliError;

pub const CACHE_ENV: &str = "CUSPSUM_CACHE_DIR";
pub const DEFAULT_DIR: &str = ".cuspsum-cache";

/// flag > environment > ./.cuspsum-cache
pub fn cache_dir(flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR)),
    }
}

fn file_name(recipe: &Recipe) -> String {
    let safe: String = recipe
        .digest()
        .chars()
        .map(|ch| match ch {
            '0'..='9' | 'a'..='z' | 'A'..='Z' => ch,
            '-' => 'm',
            ',' => '.',
            ':' => '_',
            _ => '+',
        })
        .collect();
    format!("w{}-{}.txt", recipe.weight(), safe)
}

pub fn path_for(dir: &Path, recipe: &Recipe) -> PathBuf {
    dir.join(file_name(recipe))
}

pub fn write(path: &Path, form: &CuspForm) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io = |e| CliError::io(path, e);
    writeln!(out, "{} {} {}", form.weight(), form.order(), form.recipe().digest()).map_err(io)?;
    for a in &form.series().coeffs()[1..] {
        writeln!(out, "{a}").map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Reads a cache file; `None` when its digest differs or it is too short.
pub fn read(path: &Path, recipe: &Recipe, order: usize) -> Result<Option<CuspForm>, CliError> {
    let file = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(CliError::io(path, e)),
    };
    let mut lines = BufReader::new(file).lines();
    let header = match lines.next() {
        Some(line) => line.map_err(|e| CliError::io(path, e))?,
        None => return Ok(None),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [k, n, digest] = fields[..] else {
        return Err(CliError::usage(format!("{}: malformed cache header", path.display())));
    };
    if k != recipe.weight().to_string() || digest != recipe.digest() {
        return Ok(None);
    }
    let stored: usize = n
        .parse()
        .map_err(|_| CliError::usage(format!("{}: malformed cache order", path.display())))?;
    if stored < order {
        return Ok(None);
    }
    let mut coeffs = Vec::with_capacity(stored + 1);
    coeffs.push(Integer::new());
    for line in lines.take(stored) {
        let line = line.map_err(|e| CliError::io(path, e))?;
        let a = Integer::from_str_radix(line.trim(), 10)
            .map_err(|_| CliError::usage(format!("{}: bad coefficient {line:?}", path.display())))?;
        coeffs.push(a);
    }
    if coeffs.len() != stored + 1 {
        return Ok(None);
    }
    Ok(Some(CuspForm::from_series(recipe.clone(), IntSeries::from_coeffs(coeffs))?))
}

/// Loads from the cache when possible, otherwise computes and stores.
pub fn load_or_compute(dir: &Path, recipe: &Recipe, order: usize) -> Result<CuspForm, CliError> {
    let path = path_for(dir, recipe);
    if let Some(form) = read(&path, recipe, order)? {
        return Ok(form);
    }
    let form = CuspForm::new(recipe.clone(), order)?;
    if let Err(e) = write(&path, &form) {
        eprintln!("warning: could not write cache: {e}");
    }
    Ok(form)
}
