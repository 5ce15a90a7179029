//! Tokenization and n-gram enumeration.

/// Letters, digits and combining marks. Devanagari signs (matras, virama,
/// nukta) are not alphabetic in every Unicode table, so the whole block is
/// treated as word material.
pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
        || ('\u{0900}'..='\u{097F}').contains(&c)
        || ('\u{0300}'..='\u{036F}').contains(&c)
        || c == '\''
}

/// Splits a whitespace-free token into `(leading punctuation, core,
/// trailing punctuation)`. Apostrophes are kept inside the core but never
/// start or end it.
pub fn split_affixes(token: &str) -> (&str, &str, &str) {
    let start = token
        .char_indices()
        .find(|&(_, c)| is_word_char(c) && c != '\'')
        .map(|(i, _)| i);
    let Some(start) = start else {
        return (token, "", "");
    };
    let end = token
        .char_indices()
        .rev()
        .find(|&(_, c)| is_word_char(c) && c != '\'')
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(token.len());
    (&token[..start], &token[start..end], &token[end..])
}

fn push_punct_runs(out: &mut Vec<String>, punct: &str) {
    let mut run = String::new();
    let mut last = None;
    for c in punct.chars() {
        if last.is_some() && last != Some(c) {
            out.push(std::mem::take(&mut run));
        }
        run.push(c);
        last = Some(c);
    }
    if !run.is_empty() {
        out.push(run);
    }
}

/// Whitespace tokenization with punctuation peeled off word edges.
///
/// Tokens made only of punctuation (emoticons, `...`) are kept whole. At word
/// edges, runs of one repeated punctuation character form a single token, so
/// `"wow!!!"` gives `["wow", "!!!"]` and `"hm?!"` gives `["hm", "?", "!"]`.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        let (lead, core, trail) = split_affixes(raw);
        if core.is_empty() {
            out.push(raw.to_string());
            continue;
        }
        push_punct_runs(&mut out, lead);
        out.push(core.to_string());
        push_punct_runs(&mut out, trail);
    }
    out
}

/// Contiguous n-token windows joined by single spaces.
pub fn word_ngrams<S: AsRef<str>>(tokens: &[S], n: usize) -> Vec<String> {
    if n == 0 || tokens.len() < n {
        return Vec::new();
    }
    tokens
        .windows(n)
        .map(|w| {
            let parts: Vec<&str> = w.iter().map(AsRef::as_ref).collect();
            parts.join(" ")
        })
        .collect()
}

/// Contiguous windows of `n` characters over the whole text, spaces included.
pub fn char_ngrams(text: &str, n: usize) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    if n == 0 || chars.len() < n {
        return Vec::new();
    }
    chars.windows(n).map(|w| w.iter().collect()).collect()
}

/// k-skip-n-grams: ordered n-token subsequences where at most `k` tokens are
/// skipped between neighbouring picks. Output is ordered by the position
/// tuple, so contiguous n-grams are included and `k = 0` reduces to
/// [`word_ngrams`].
pub fn skip_grams<S: AsRef<str>>(tokens: &[S], k: usize, n: usize) -> Vec<String> {
    let mut out = Vec::new();
    if n == 0 || tokens.len() < n {
        return out;
    }
    let mut picked: Vec<usize> = Vec::with_capacity(n);
    for start in 0..tokens.len() {
        picked.clear();
        picked.push(start);
        extend_skip(tokens, k, n, &mut picked, &mut out);
    }
    out
}

fn extend_skip<S: AsRef<str>>(
    tokens: &[S],
    k: usize,
    n: usize,
    picked: &mut Vec<usize>,
    out: &mut Vec<String>,
) {
    if picked.len() == n {
        let parts: Vec<&str> = picked.iter().map(|&i| tokens[i].as_ref()).collect();
        out.push(parts.join(" "));
        return;
    }
    let last = *picked.last().expect("non-empty");
    let hi = (last + k + 1).min(tokens.len() - 1);
    for next in last + 1..=hi {
        picked.push(next);
        extend_skip(tokens, k, n, picked, out);
        picked.pop();
    }
}
