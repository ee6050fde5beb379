use std::fs;

/// Subcommand names, used to find where injected flags go.
pub const SUBCOMMANDS: [&str; 6] = ["constant", "boundary", "verify", "dp", "bollobas", "certify"];

/// Reads a flat key/value config file into command-line flags. Keys mirror
/// flag names (`tau_steps` and `tau-steps` are equivalent).
pub fn config_flags(path: &str) -> Result<Vec<String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| format!("cannot parse config {path}: {e}"))?;
    let mut flags = Vec::new();
    for (key, value) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => flags.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => flags.extend([flag, s]),
            toml::Value::Integer(i) => flags.extend([flag, i.to_string()]),
            toml::Value::Float(x) => flags.extend([flag, x.to_string()]),
            other => return Err(format!("config key `{key}`: unsupported value {other}")),
        }
    }
    Ok(flags)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Rewrites `argv` so that config-file flags sit directly after the
/// subcommand and every explicit flag follows them. Global flags given before
/// the subcommand are moved after it; clap accepts them there.
pub fn with_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let injected = config_flags(&path)?;
    let Some(sub) = argv
        .iter()
        .skip(1)
        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
        .map(|p| p + 1)
    else {
        return Ok(argv);
    };
    let mut out = vec![argv[0].clone(), argv[sub].clone()];
    out.extend(injected);
    out.extend(argv[1..sub].iter().cloned());
    out.extend(argv[sub + 1..].iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn no_config_is_identity() {
        let a = args("prog --precision 5 constant");
        assert_eq!(with_config(a.clone()).unwrap(), a);
    }

    #[test]
    fn config_goes_before_explicit_flags() {
        let dir = std::env::temp_dir().join(format!("bsq-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        fs::write(&path, "tau_steps = 8\nrefine = true\nkind = \"eta\"\n").unwrap();
        let p = path.to_str().unwrap();
        let out = with_config(args(&format!("prog --config {p} dp --tau-steps 16"))).unwrap();
        assert_eq!(out[1], "dp");
        let pos8 = out.iter().position(|a| a == "8").unwrap();
        let pos16 = out.iter().position(|a| a == "16").unwrap();
        assert!(pos8 < pos16);
        assert!(out.contains(&"--refine".to_string()));
        assert!(out.contains(&"eta".to_string()));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn missing_file_is_an_error() {
        assert!(with_config(args("prog --config /nonexistent/x.toml constant")).is_err());
    }
}
