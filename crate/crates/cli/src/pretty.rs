//! Human-readable renderings. Each takes the JSON a command produced, so the
//! pretty form never carries information the JSON lacks.

use serde_json::Value;

fn str_of(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// `{"free_rank":1,"torsion":[2]}` at p = 2 becomes `Z + Z/2^2`.
fn shape(v: &Value, p: &str) -> String {
    let free = v["free_rank"].as_u64().unwrap_or(0);
    let mut parts: Vec<String> = Vec::new();
    match free {
        0 => {}
        1 => parts.push("Z".into()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(usize_list(&v["torsion"]).iter().map(|e| format!("Z/{p}^{e}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn usize_list(v: &Value) -> Vec<u64> {
    v.as_array().into_iter().flatten().filter_map(Value::as_u64).collect()
}

/// `Lambda(gamma..) (x) Z_(p)[[x]]/(c*x^e, ...)` from a presentation.
pub fn presentation(v: &Value) -> String {
    let p = str_of(&v["p"]);
    let gammas: Vec<String> = usize_list(&v["gamma_degrees"]).iter().map(|d| format!("gamma{d}")).collect();
    let gens: Vec<String> = v["ideal"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|pair| {
            let c = str_of(&pair[0]);
            let e = str_of(&pair[1]);
            let power = if e == "1" { "x".to_string() } else { format!("x^{e}") };
            if c == "1" {
                power
            } else {
                format!("{c}*{power}")
            }
        })
        .collect();
    let ring = format!("Z_({p})[[x]]/({})", gens.join(", "));
    let body = if gammas.is_empty() { ring } else { format!("Lambda({}) (x) {ring}", gammas.join(", ")) };
    let mults: Vec<String> = usize_list(&v["gamma_degrees"])
        .iter()
        .zip(usize_list(&v["gamma_multipliers"]))
        .filter(|(_, s)| *s > 0)
        .map(|(d, s)| format!("gamma{d} = {p}^{s} * y{}", (d + 1) / 2))
        .collect();
    let mut out = format!("BP^*(PW({}, {})) at p = {p}: {body}\n", str_of(&v["n"]), str_of(&v["k"]));
    if !mults.is_empty() {
        out += &format!("  where {}\n", mults.join(", "));
    }
    out
}

pub fn engine(v: &Value) -> String {
    let mut out = format!(
        "E_inf for PW({}, {}) at p = {} (xmax {}, degrees <= {})\n",
        str_of(&v["n"]),
        str_of(&v["k"]),
        str_of(&v["p"]),
        str_of(&v["xmax"]),
        str_of(&v["window"])
    );
    let p = str_of(&v["p"]);
    let column: Vec<String> = v["x_column"].as_array().into_iter().flatten().map(|c| shape(c, &p)).collect();
    out += &format!("  x column: {}\n", column.join(", "));
    for g in v["gamma_valuations"].as_array().into_iter().flatten() {
        out += &format!("  y{} coordinate valuation: {}\n", str_of(&g[0]), str_of(&g[1]));
    }
    for slot in v["slots"].as_array().into_iter().flatten() {
        let gens: Vec<String> = slot["generators"].as_array().into_iter().flatten().map(str_of).collect();
        out += &format!(
            "  E^{{{},{}}} = {}  [{}]\n",
            str_of(&slot["s"]),
            str_of(&slot["q"]),
            shape(&slot["shape"], &p),
            gens.join(", ")
        );
    }
    out
}

pub fn both(v: &Value) -> String {
    let mut out = presentation(&v["closed_form"]);
    out += &engine(&v["engine"]);
    let cc = &v["cross_check"];
    if cc["agree"] == true {
        out += &format!("agree on {} checks\n", str_of(&cc["checked"]));
    } else {
        let d = &cc["first_discrepancy"];
        out += &format!(
            "DISAGREE at {} {}: engine {} vs closed form {}\n",
            str_of(&d["what"]),
            str_of(&d["slot"]),
            str_of(&d["engine"]),
            str_of(&d["closed_form"])
        );
    }
    out
}

pub fn series(v: &Value) -> String {
    format!("{}\n", str_of(&v["series"]))
}

pub fn obstruction(v: &Value) -> String {
    let mut out = format!(
        "W({},{}) -> W({},{}): {}\n",
        str_of(&v["n"]),
        str_of(&v["k"]),
        str_of(&v["m"]),
        str_of(&v["l"]),
        str_of(&v["verdict"])
    );
    for c in v["criteria"].as_array().into_iter().flatten() {
        let mark = if c["fires"] == true { "fires" } else { "-" };
        let witness = if c["witness"].is_null() { String::new() } else { format!(" {}", c["witness"]) };
        out += &format!("  {:<12} {mark}{witness}\n", str_of(&c["name"]));
    }
    out
}

pub fn selfcheck(v: &Value) -> String {
    let mut out = String::new();
    for s in v["suites"].as_array().into_iter().flatten() {
        let status = if s["passed"] == true { "PASS" } else { "FAIL" };
        out += &format!(
            "[{status}] {} {} ({} ms): {}\n",
            str_of(&s["id"]),
            str_of(&s["name"]),
            str_of(&s["elapsed_ms"]),
            str_of(&s["detail"])
        );
    }
    let overall = if v["passed"] == true { "all suites passed" } else { "some suites failed" };
    out + overall + "\n"
}
