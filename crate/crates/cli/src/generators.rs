//! Built-in instances and algorithm names accepted on the command line.

use fairdiv::adversarial::{
    fair_share_violation_instance, lower_bound_instances, multi_agent_instance,
};
use fairdiv::algorithms::{Algorithm, PolyParam};
use fairdiv::model::{three_round_cp, two_round_symmetric, Instance, DEFAULT_CP_EPS};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct NamedInstance {
    pub name: String,
    pub instance: Instance,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn reals(
    spec: &str,
    args: &str,
    count: std::ops::RangeInclusive<usize>,
) -> Result<Vec<f64>, CliError> {
    let values = args
        .split(',')
        .map(|a| a.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|_| usage(format!("{spec}: arguments must be numbers")))?;
    if !count.contains(&values.len()) {
        return Err(usage(format!(
            "{spec}: expected {} to {} arguments, found {}",
            count.start(),
            count.end(),
            values.len()
        )));
    }
    Ok(values)
}

/// Builds the instances named by `spec`:
///
/// - `two-round-symmetric:v`
/// - `three-round-cp:v11,v21[,eps]`
/// - `fair-share-violation:p`
/// - `lb-pair` (two instances)
/// - `multi-agent:n`
pub fn generate(spec: &str) -> Result<Vec<NamedInstance>, CliError> {
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    let one = |instance: Instance| {
        vec![NamedInstance {
            name: spec.to_string(),
            instance,
        }]
    };
    Ok(match kind {
        "two-round-symmetric" => one(two_round_symmetric(reals(spec, args, 1..=1)?[0])?),
        "three-round-cp" => {
            let v = reals(spec, args, 2..=3)?;
            one(three_round_cp(
                v[0],
                v[1],
                v.get(2).copied().unwrap_or(DEFAULT_CP_EPS),
            )?)
        }
        "fair-share-violation" => one(fair_share_violation_instance(reals(spec, args, 1..=1)?[0])?),
        "lb-pair" if args.is_empty() => {
            let (a, b) = lower_bound_instances();
            vec![
                NamedInstance {
                    name: "lb-pair/1".into(),
                    instance: a,
                },
                NamedInstance {
                    name: "lb-pair/2".into(),
                    instance: b,
                },
            ]
        }
        "multi-agent" => {
            let n = args
                .trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("{spec}: n must be a positive integer")))?;
            one(multi_agent_instance(n)?)
        }
        _ => return Err(usage(format!("unknown generator {spec:?}"))),
    })
}

/// Resolves an algorithm name. `poly` and `guarded` take their exponent
/// from `p`; the named special cases ignore it.
pub fn parse_algorithm(name: &str, p: Option<f64>) -> Result<Algorithm, CliError> {
    let need_p = || p.ok_or_else(|| usage(format!("algorithm {name:?} needs --p")));
    let alg = match name {
        "equal-split" => Algorithm::EQUAL_SPLIT,
        "proportional" => Algorithm::PROPORTIONAL,
        "quadratic" => Algorithm::QUADRATIC,
        "greedy" => Algorithm::GREEDY,
        "poly" => {
            let p = need_p()?;
            Algorithm::Poly(if p == f64::INFINITY {
                PolyParam::Infinity
            } else {
                PolyParam::new(p)?
            })
        }
        "guarded" => {
            let p = need_p()?;
            // Surface a bad exponent now rather than on the first run.
            fairdiv::algorithms::GuardedAllocator::new(p)?;
            Algorithm::Guarded(p)
        }
        _ => return Err(usage(format!("unknown algorithm {name:?}"))),
    };
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(
            generate("two-round-symmetric:0.599").unwrap()[0]
                .instance
                .rounds(),
            2
        );
        assert_eq!(
            generate("three-round-cp:0.76,0.97").unwrap()[0]
                .instance
                .rounds(),
            3
        );
        assert_eq!(
            generate("three-round-cp:0.76,0.97,1e-3").unwrap()[0]
                .instance
                .value(1, 1),
            1e-3
        );
        let pair = generate("lb-pair").unwrap();
        assert_eq!(pair.len(), 2);
        assert_eq!(pair[1].name, "lb-pair/2");
        assert_eq!(generate("multi-agent:9").unwrap()[0].instance.agents(), 9);
        assert_eq!(
            generate("fair-share-violation:3").unwrap()[0].name,
            "fair-share-violation:3"
        );
    }

    #[test]
    fn bad_generators() {
        for spec in [
            "nope",
            "two-round-symmetric",
            "two-round-symmetric:a",
            "three-round-cp:0.5",
            "lb-pair:3",
            "multi-agent:x",
        ] {
            assert!(matches!(generate(spec), Err(CliError::Usage(_))), "{spec}");
        }
        assert!(matches!(
            generate("multi-agent:8"),
            Err(CliError::Adversarial(_))
        ));
        assert!(matches!(
            generate("fair-share-violation:2"),
            Err(CliError::Adversarial(_))
        ));
        assert!(matches!(
            generate("two-round-symmetric:1.3"),
            Err(CliError::Validation(_))
        ));
    }

    #[test]
    fn algorithms() {
        assert_eq!(
            parse_algorithm("greedy", Some(3.0)).unwrap(),
            Algorithm::GREEDY
        );
        assert_eq!(
            parse_algorithm("poly", Some(2.0)).unwrap(),
            Algorithm::QUADRATIC
        );
        assert_eq!(
            parse_algorithm("poly", Some(f64::INFINITY)).unwrap(),
            Algorithm::GREEDY
        );
        assert_eq!(
            parse_algorithm("guarded", Some(2.7)).unwrap(),
            Algorithm::Guarded(2.7)
        );
        assert!(parse_algorithm("guarded", None).is_err());
        assert!(parse_algorithm("guarded", Some(f64::INFINITY)).is_err());
        assert!(parse_algorithm("poly", Some(-1.0)).is_err());
        assert!(parse_algorithm("random", None).is_err());
    }
}
