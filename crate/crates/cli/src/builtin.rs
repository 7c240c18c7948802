//! The builtin algebra corpus, addressed as `builtin:<id>`.

use qhh::presentation::{self, Presentation};
use qhh::{Field, Scalar};

/// Ids accepted after `builtin:`; parameters in parentheses.
pub const BUILTIN_IDS: &[&str] = &[
    "xu",
    "xu-dual",
    "bgms",
    "loop-x2",
    "truncated-loop(d)",
    "truncated-cycle(m,d)",
    "qm-loop",
    "qm-linear",
    "qm-radsq",
    "qm-ab",
    "qm-cycle3",
    "qm-loopy",
    "lambda(m,n)",
];

/// Resolves a builtin id over `field`; `q` is the parameter of `bgms`.
pub fn builtin(id: &str, field: Field, q: &Scalar) -> Result<Presentation, String> {
    let (name, args) = split_args(id)?;
    let want = |n: usize| -> Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("builtin `{name}` takes {n} parameter(s), got {}", args.len()))
        }
    };
    let p = match name {
        "xu" => {
            want(0)?;
            presentation::xu(field)
        }
        "xu-dual" => {
            want(0)?;
            presentation::xu_dual(field)
        }
        "bgms" => {
            want(0)?;
            presentation::bgms(field, q.clone())
        }
        "loop-x2" => {
            want(0)?;
            presentation::truncated_loop(field, 2)
        }
        "truncated-loop" => {
            want(1)?;
            if args[0] < 2 {
                return Err("truncated-loop needs d ≥ 2".into());
            }
            presentation::truncated_loop(field, args[0])
        }
        "truncated-cycle" => {
            want(2)?;
            if args[0] < 1 || args[1] < 2 {
                return Err("truncated-cycle needs m ≥ 1 and d ≥ 2".into());
            }
            presentation::truncated_cycle(field, args[0], args[1])
        }
        "lambda" => {
            want(2)?;
            if args[0] < 1 || args[1] < 1 {
                return Err("lambda needs m ≥ 1 and n ≥ 1".into());
            }
            presentation::lambda(field, args[0], args[1])
        }
        qm if qm.starts_with("qm-") => {
            want(0)?;
            presentation::quadratic_monomial_samples(field)
                .into_iter()
                .find(|(k, _)| *k == qm)
                .map(|(_, p)| p)
                .ok_or_else(|| unknown(id))?
        }
        _ => return Err(unknown(id)),
    };
    Ok(p)
}

fn unknown(id: &str) -> String {
    format!("unknown builtin `{id}` (known: {})", BUILTIN_IDS.join(", "))
}

fn split_args(id: &str) -> Result<(&str, Vec<usize>), String> {
    let Some(open) = id.find('(') else { return Ok((id, Vec::new())) };
    let inner = id[open + 1..].strip_suffix(')').ok_or_else(|| format!("unbalanced parentheses in `{id}`"))?;
    let args = inner
        .split(',')
        .map(|a| a.trim().parse::<usize>().map_err(|_| format!("bad parameter `{a}` in `{id}`")))
        .collect::<Result<_, _>>()?;
    Ok((&id[..open], args))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_parameterised_ids() {
        let f = Field::Prime(3);
        let one = f.one();
        assert_eq!(builtin("truncated-cycle(3,2)", f, &one).unwrap(), presentation::truncated_cycle(f, 3, 2));
        assert_eq!(builtin("loop-x2", f, &one).unwrap(), presentation::truncated_loop(f, 2));
        assert!(builtin("qm-ab", f, &one).is_ok());
        assert!(builtin("lambda(2,1)", f, &one).is_ok());
        assert!(builtin("nope", f, &one).is_err());
        assert!(builtin("truncated-cycle(3)", f, &one).is_err());
        assert!(builtin("truncated-loop(1)", f, &one).is_err());
    }
}
