use std::fs;
use std::io::Write;
use std::path::Path;

use zkmatch_core::artifact::{
    from_json, merkle_params_fingerprint, to_json, CertificateFile, CommitmentFile,
    MatchReportFile, ProofFile, DEFAULT_CHALLENGE_SEED,
};
use zkmatch_core::hashmatch::{parse_escaped, DEFAULT_BASE};
use zkmatch_core::merkle::{build_tree, prove_membership, verify_membership};
use zkmatch_core::mimc::DEFAULT_SEED;
use zkmatch_core::polyeval::{
    prove_absence, prove_containment, verify_certificate, window_polynomial_for_corpus,
};
use zkmatch_core::{
    corpus_match, fingerprint, AlphabetPolicy, Certificate, Corpus, Error, LegalPatternSet,
    MatchAlgorithm, MimcParams, PatternSet, PolyRing, PrimeField, RollingParams,
};

use crate::{echo, Algo, CommitArgs, Failure, FieldArgs, MatchArgs, Mode, ProveArgs, VerifyArgs};

const DEFAULT_POLICY: &str = "printable";

pub fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(2, format!("cannot write output: {e}"))),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))
}

fn mimc_for(field: PrimeField, args: &FieldArgs) -> Result<MimcParams, Failure> {
    let seed = args.seed.as_deref().map_or(DEFAULT_SEED, str::as_bytes);
    Ok(MimcParams::from_seed(field, seed)?)
}

fn mismatch(what: &str) -> Failure {
    Failure::new(5, format!("parameter fingerprint mismatch: {what}"))
}

fn invalid(why: impl std::fmt::Display) -> Failure {
    Failure::new(1, format!("invalid artifact: {why}"))
}

pub fn cmd_match(args: &MatchArgs) -> Result<u8, Failure> {
    let field = args.field.field()?;
    let corpus = Corpus::load(&args.corpus)?;
    let patterns = match (&args.patterns, &args.pattern) {
        (Some(path), _) => PatternSet::load(path)?,
        (None, Some(p)) => PatternSet::new(vec![parse_escaped(p)?])?,
        (None, None) => {
            return Err(Failure::new(
                2,
                "either --patterns or --pattern is required",
            ))
        }
    };
    let first_len = patterns.patterns().first().map_or(1, Vec::len);
    let params = RollingParams::new(field, args.field.base.unwrap_or(DEFAULT_BASE), first_len)?;
    let algo = match args.algo {
        Algo::Naive => MatchAlgorithm::Naive,
        Algo::RabinKarp => MatchAlgorithm::RabinKarp,
    };
    let report = corpus_match(&corpus, &patterns, &params, algo)?;
    let file = MatchReportFile::new(&report, &patterns, algo, corpus.len(), echo(args));
    write_output(args.out.as_deref(), &to_json(&file))?;
    if args.fail_on_absent && !report.any_match() {
        log::info!("no pattern occurs in the corpus");
        return Ok(1);
    }
    Ok(0)
}

/// Legal window set of a corpus, with the "nothing to commit" cases mapped to exit 3.
fn legal_set(
    corpus: &Corpus,
    window_len: usize,
    policy: &AlphabetPolicy,
) -> Result<LegalPatternSet, Failure> {
    if window_len > corpus.max_document_len() {
        return Err(Failure::new(
            3,
            format!(
                "window length {window_len} exceeds the longest document ({} bytes)",
                corpus.max_document_len()
            ),
        ));
    }
    let set = LegalPatternSet::from_texts(
        corpus.documents().iter().map(|d| d.bytes.as_slice()),
        window_len,
        policy,
    )?;
    if set.is_empty() {
        return Err(Failure::new(
            3,
            format!(
                "no window of length {window_len} passes the {:?} policy",
                policy.name()
            ),
        ));
    }
    Ok(set)
}

pub fn cmd_commit(args: &CommitArgs) -> Result<u8, Failure> {
    let policy = AlphabetPolicy::by_name(&args.policy)?;
    let mimc = mimc_for(args.field.field()?, &args.field)?;
    let corpus = Corpus::load(&args.corpus)?;
    let set = legal_set(&corpus, args.window_len, &policy)?;
    let tree = build_tree(&set, &mimc)?;
    let file = CommitmentFile::new(&tree, &mimc, policy.name(), args.window_len, echo(args));
    write_output(args.out.as_deref(), &to_json(&file))?;
    Ok(0)
}

fn load_commitment(path: &Path) -> Result<(CommitmentFile, MimcParams), Failure> {
    let c: CommitmentFile =
        from_json(&read_text(path)?).map_err(|e| Failure::new(2, e.to_string()))?;
    let mimc = c
        .mimc()
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    Ok((c, mimc))
}

/// Flags that were given explicitly must agree with the commitment header.
fn check_against_commitment(
    c: &CommitmentFile,
    mimc: &MimcParams,
    field: &FieldArgs,
    policy: Option<&str>,
    window_len: Option<usize>,
) -> Result<(), Failure> {
    if field.modulus.is_some_and(|m| m != c.header.field_modulus) {
        return Err(mismatch("field modulus differs from the commitment"));
    }
    if field.seed.is_some() && mimc_for(*mimc.field(), field)?.digest() != c.header.mimc_fingerprint
    {
        return Err(mismatch("MiMC seed differs from the commitment"));
    }
    if policy.is_some_and(|p| p != c.header.policy) {
        return Err(mismatch("alphabet policy differs from the commitment"));
    }
    if window_len.is_some_and(|t| t != c.header.window_len) {
        return Err(mismatch("window length differs from the commitment"));
    }
    Ok(())
}

pub fn cmd_prove(args: &ProveArgs) -> Result<u8, Failure> {
    let pattern = parse_escaped(&args.pattern)?;
    match args.mode {
        Mode::Merkle => prove_merkle(args, &pattern),
        Mode::PolyContain | Mode::PolyAbsent => prove_poly(args, &pattern),
    }
}

fn prove_merkle(args: &ProveArgs, pattern: &[u8]) -> Result<u8, Failure> {
    let (mimc, policy_name, window_len, committed) = match &args.commitment {
        Some(path) => {
            let (c, mimc) = load_commitment(path)?;
            check_against_commitment(
                &c,
                &mimc,
                &args.field,
                args.policy.as_deref(),
                args.window_len,
            )?;
            let root = c.root()?;
            (
                mimc,
                c.header.policy.clone(),
                c.header.window_len,
                Some(root),
            )
        }
        None => (
            mimc_for(args.field.field()?, &args.field)?,
            args.policy
                .clone()
                .unwrap_or_else(|| DEFAULT_POLICY.to_string()),
            args.window_len.unwrap_or(pattern.len()),
            None,
        ),
    };
    let policy = AlphabetPolicy::by_name(&policy_name)?;
    let corpus = Corpus::load(&args.corpus)?;
    let set = legal_set(&corpus, window_len, &policy)?;
    if !set.contains(pattern) {
        return Err(Failure::new(
            4,
            "pattern is not a legal window of the corpus",
        ));
    }
    let tree = build_tree(&set, &mimc)?;
    if committed.is_some_and(|root| root != tree.root()) {
        return Err(Failure::new(2, "corpus does not match the commitment root"));
    }
    let proof = prove_membership(&tree, &set, pattern)?;
    let fp = merkle_params_fingerprint(&mimc, &policy_name, window_len);
    let file = ProofFile::new(&proof, mimc.field(), &fp, echo(args));
    write_output(args.out.as_deref(), &to_json(&file))?;
    Ok(0)
}

fn prove_poly(args: &ProveArgs, pattern: &[u8]) -> Result<u8, Failure> {
    let window_len = args.window_len.unwrap_or(pattern.len());
    if pattern.len() != window_len {
        return Err(Failure::new(
            2,
            format!(
                "pattern has length {} but the window length is {window_len}",
                pattern.len()
            ),
        ));
    }
    let field = args.field.field()?;
    let params = RollingParams::new(field, args.field.base.unwrap_or(DEFAULT_BASE), window_len)?;
    let corpus = Corpus::load(&args.corpus)?;
    let w = window_polynomial_for_corpus(&corpus, &params)
        .map_err(|e| Failure::new(3, e.to_string()))?;
    let cert = if args.mode == Mode::PolyContain {
        let quotient = prove_containment(&w, pattern, &params).map_err(|e| match e {
            Error::NotContained => Failure::new(
                4,
                "pattern fingerprint is not a root of the window polynomial",
            ),
            other => other.into(),
        })?;
        let patterns = PatternSet::new(vec![pattern.to_vec()])?;
        if !corpus_match(&corpus, &patterns, &params, MatchAlgorithm::RabinKarp)?.any_match() {
            log::warn!("fingerprint matches a window but no window equals the pattern byte for byte (hash collision)");
        }
        Certificate::Containment { quotient }
    } else {
        Certificate::Absence(prove_absence(&w, pattern, &params).map_err(|e| match e {
            Error::IsContained => Failure::new(
                4,
                "pattern fingerprint is a root; absence cannot be certified",
            ),
            other => other.into(),
        })?)
    };
    let seed = args
        .field
        .seed
        .as_deref()
        .map_or(DEFAULT_CHALLENGE_SEED, str::as_bytes);
    let h = fingerprint(pattern, &params)?;
    let file = CertificateFile::new(&w, h, &cert, &params, seed, echo(args));
    write_output(args.out.as_deref(), &to_json(&file))?;
    Ok(0)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let text = read_text(&args.artifact)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(invalid)?;
    let code = if value.get("siblings").is_some() {
        verify_proof(args, &text)?
    } else if value.get("window_polynomial").is_some() {
        verify_poly(args, &text)?
    } else {
        return Err(invalid("neither a membership proof nor a certificate"));
    };
    if code == 0 {
        log::info!("artifact verified");
    }
    Ok(code)
}

fn verify_proof(args: &VerifyArgs, text: &str) -> Result<u8, Failure> {
    let file: ProofFile = from_json(text).map_err(invalid)?;
    let expected = args.pattern.as_deref().map(parse_escaped).transpose()?;
    let (mimc, fp, root) = match &args.commitment {
        Some(path) => {
            let (c, mimc) = load_commitment(path)?;
            check_against_commitment(
                &c,
                &mimc,
                &args.field,
                args.policy.as_deref(),
                args.window_len,
            )?;
            let root = c.root()?;
            (mimc, c.params_fingerprint, Some(root))
        }
        None => {
            let mimc = mimc_for(args.field.field()?, &args.field)?;
            let t = match args.window_len {
                Some(t) => t,
                None => hex_len(&file.pattern).ok_or_else(|| invalid("pattern is not hex"))?,
            };
            let policy = args.policy.as_deref().unwrap_or(DEFAULT_POLICY);
            AlphabetPolicy::by_name(policy)?;
            let fp = merkle_params_fingerprint(&mimc, policy, t);
            (mimc, fp, None)
        }
    };
    if file.params_fingerprint != fp {
        return Err(mismatch("proof was made under different public parameters"));
    }
    let proof = file.to_proof(mimc.field()).map_err(invalid)?;
    if expected.is_some_and(|p| p != proof.leaf_bytes) {
        return Err(invalid("proof is for a different pattern"));
    }
    let root = root.unwrap_or(proof.root);
    match verify_membership(root, &proof, &mimc) {
        Ok(true) => Ok(0),
        Ok(false) => {
            eprintln!("zkmatch: membership proof does not reproduce the root");
            Ok(1)
        }
        Err(e) => Err(invalid(e)),
    }
}

fn hex_len(s: &str) -> Option<usize> {
    s.len().is_multiple_of(2).then_some(s.len() / 2)
}

fn verify_poly(args: &VerifyArgs, text: &str) -> Result<u8, Failure> {
    let file: CertificateFile = from_json(text).map_err(invalid)?;
    if args.field.modulus.is_some_and(|m| m != file.field_modulus) {
        return Err(mismatch("field modulus differs from the certificate"));
    }
    let recorded = file.rolling_params().map_err(invalid)?;
    let params = RollingParams::new(
        *recorded.field(),
        args.field.base.unwrap_or(file.base),
        args.window_len.unwrap_or(file.window_len),
    )?;
    if params.digest() != file.rolling_params_fingerprint {
        return Err(mismatch(
            "certificate was made under different rolling-hash parameters",
        ));
    }
    let d = file.decode().map_err(invalid)?;
    if let Some(p) = &args.pattern {
        if fingerprint(&parse_escaped(p)?, &params)? != d.h {
            return Err(invalid(
                "certificate is for a different pattern fingerprint",
            ));
        }
    }
    let ring = PolyRing::new(*params.field());
    match verify_certificate(
        &ring,
        &d.window_polynomial,
        d.h,
        &d.certificate,
        file.mode,
        &d.challenge_seed,
    ) {
        Ok(true) => Ok(0),
        Ok(false) => {
            eprintln!("zkmatch: certificate identity does not hold");
            Ok(1)
        }
        Err(e) => Err(invalid(e)),
    }
}
