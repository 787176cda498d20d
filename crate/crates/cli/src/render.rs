//! Text rendering of JSON reports. Every command renders through here, so a saved
//! report re-renders exactly as it was first printed.

use anyhow::{bail, Result};
use serde_json::Value;

fn verdict(v: &Value) -> &'static str {
    if v["pass"].as_bool().unwrap_or(false) {
        "pass"
    } else {
        "FAIL"
    }
}

fn str_of(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn watermark(v: &Value, out: &mut String) {
    if let Some(w) = v["watermark"].as_str() {
        out.push_str(&format!("note: {w} (seed {})\n", v["seed"]));
    }
}

pub fn render(v: &Value) -> Result<String> {
    let mut out = String::new();
    match v["kind"].as_str() {
        Some("locus") => {
            let kind = if v["linear"].as_bool().unwrap_or(false) {
                "linear"
            } else {
                "affine"
            };
            out.push_str(&format!("{kind} locus: {}\n", verdict(v)));
            watermark(v, &mut out);
            for it in v["items"].as_array().into_iter().flatten() {
                out.push_str(&format!(
                    "  hyperplane {} j={}: {}\n",
                    it["hyperplane"],
                    it["j"],
                    str_of(&it["residual"])
                ));
            }
            if let Some(d) = v.get("via_2d") {
                out.push_str(&format!(
                    "2D decomposition: {}, agrees: {}\n",
                    verdict(d),
                    d["agrees"]
                ));
            }
        }
        Some("psi") => {
            if v["terminates"].as_bool() == Some(false) {
                out.push_str(&format!(
                    "psi: no termination after {} steps (not a locus configuration)\n",
                    v["steps"]
                ));
                return Ok(out);
            }
            out.push_str(&format!("psi: M = {}\n", v["M"]));
            out.push_str(&format!("prefactor = {}\n", str_of(&v["prefactor"])));
            watermark(v, &mut out);
            for (name, ok) in v["checks"].as_object().into_iter().flatten() {
                let ok = if ok.as_bool().unwrap_or(false) {
                    "pass"
                } else {
                    "FAIL"
                };
                out.push_str(&format!("  {name}: {ok}\n"));
            }
            out.push_str(&format!("overall: {}\n", verdict(v)));
        }
        Some("integrals") => {
            out.push_str(&format!(
                "L_f for f = {} (order {})\n",
                str_of(&v["f"]),
                v["order"]
            ));
            for t in v["operator"].as_array().into_iter().flatten() {
                out.push_str(&format!(
                    "  d^{}: {}\n",
                    t["index"],
                    str_of(&t["coefficient"])
                ));
            }
            watermark(v, &mut out);
            out.push_str(&format!("eigen L_f psi = f(k) psi: {}\n", v["eigen"]));
            out.push_str(&format!("[L_f, L] = 0: {}\n", v["commutator_zero"]));
            match v["surviving_monomial"].as_array() {
                None => out.push_str(&format!(
                    "[L_f, L] annihilates monomials of degree <= {}\n",
                    v["max_degree"]
                )),
                Some(m) => out.push_str(&format!(
                    "[L_f, L] does not annihilate x^{}\n",
                    Value::Array(m.clone())
                )),
            }
            out.push_str(&format!("overall: {}\n", verdict(v)));
        }
        Some("hadamard") => {
            out.push_str(&format!(
                "M = {}\nminimal N = {}\nterminates: {}\nchain verified: {}\n",
                v["M"], v["minimal_N"], v["terminates"], v["chain_verified"]
            ));
            for (nu, c) in v["coefficients"]
                .as_array()
                .into_iter()
                .flatten()
                .enumerate()
            {
                out.push_str(&format!("U{nu} = {}\n", str_of(c)));
            }
            for r in v["rows"].as_array().into_iter().flatten() {
                if r["residual"] != "0" {
                    out.push_str(&format!(
                        "FAIL {} row {}: {}\n",
                        str_of(&r["identity"]),
                        r["nu"],
                        str_of(&r["residual"])
                    ));
                }
            }
        }
        Some("adler-moser") => {
            out.push_str(&format!("Adler-Moser level {}\n", v["level"]));
            for (j, c) in v["constants"].as_array().into_iter().flatten().enumerate() {
                out.push_str(&format!("c{} = {}\n", j + 2, str_of(c)));
            }
            for (j, c) in v["chi"].as_array().into_iter().flatten().enumerate() {
                out.push_str(&format!("chi{} = {}\n", j + 1, str_of(c)));
            }
            out.push_str(&format!("W = {}\n", str_of(&v["wronskian"])));
            out.push_str(&format!("u = {}\n", str_of(&v["potential"])));
            match v["poles"].as_array() {
                Some(poles) => {
                    for p in poles {
                        out.push_str(&format!(
                            "pole {} with m = {}\n",
                            str_of(&p["point"]),
                            p["m"]
                        ));
                    }
                    out.push_str(&format!("pole locus: {}\n", verdict(v)));
                }
                None => out.push_str("poles: not computed exactly\n"),
            }
        }
        Some("xi") => {
            out.push_str(&format!("BA function, m = {}\n", v["m"]));
            for (j, x) in v["xi"].as_array().into_iter().flatten().enumerate() {
                out.push_str(&format!("xi{} = {}\n", j + 1, str_of(x)));
            }
            for (j, a) in v["a"].as_array().into_iter().flatten().enumerate() {
                out.push_str(&format!("a{} = {}\n", j + 1, str_of(a)));
            }
            out.push_str(&format!("u = {}\n", str_of(&v["potential"])));
            out.push_str(&format!("psi = {}\n", str_of(&v["psi"])));
        }
        Some("berest-lutsenko") => {
            out.push_str(&format!(
                "Berest-Lutsenko k = {}, {} bits\n",
                v["k"], v["precision"]
            ));
            for (j, l) in v["lines"].as_array().into_iter().flatten().enumerate() {
                let a = &l["angle"];
                out.push_str(&format!(
                    "line {j}: phi = {:.20}{:+.3e}i, m = {}\n",
                    a[0].as_f64().unwrap_or(f64::NAN),
                    a[1].as_f64().unwrap_or(f64::NAN),
                    l["multiplicity"]
                ));
            }
            out.push_str(&format!(
                "max residual {:.3e} (bound {:.1e}): {}\n",
                v["max_residual"].as_f64().unwrap_or(f64::NAN),
                v["bound"].as_f64().unwrap_or(f64::NAN),
                verdict(v)
            ));
        }
        Some(other) => bail!("unknown report kind '{other}'"),
        None if v.get("hyperplanes").is_some() => {
            out.push_str(&format!(
                "configuration in C^{} with {} hyperplanes\n",
                v["dimension"],
                v["hyperplanes"].as_array().map_or(0, Vec::len)
            ));
            for h in v["hyperplanes"].as_array().into_iter().flatten() {
                let normal: Vec<String> = h["normal"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(str_of)
                    .collect();
                out.push_str(&format!(
                    "  ({}) offset {} m = {}\n",
                    normal.join(", "),
                    str_of(&h["offset"]),
                    h["multiplicity"]
                ));
            }
        }
        None => bail!("document has no 'kind' field"),
    }
    Ok(out)
}
