//! Character n-gram language model with add-k smoothing.
//!
//! `P(c | ctx) = (count(ctx c) + k) / (count(ctx) + k |V|)` where `V` is the
//! set of characters seen in training plus the end-of-sentence token. The
//! begin token only ever appears in contexts.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 3;
pub const MODEL_FORMAT_VERSION: u32 = 1;
const MODEL_MAGIC: &str = "#zhbraille-ngram";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Bos,
    Eos,
    Char(char),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Bos => f.write_str("<s>"),
            Token::Eos => f.write_str("</s>"),
            Token::Char(c) => write!(f, "{c}"),
        }
    }
}

impl Token {
    fn parse(s: &str) -> Option<Token> {
        match s {
            "<s>" => Some(Token::Bos),
            "</s>" => Some(Token::Eos),
            _ => {
                let mut it = s.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => Some(Token::Char(c)),
                    _ => None,
                }
            }
        }
    }
}

pub(crate) type TokenId = u32;
pub(crate) const BOS: TokenId = 0;
pub(crate) const EOS: TokenId = 1;
pub(crate) const UNKNOWN: TokenId = TokenId::MAX;
const PAD: TokenId = TokenId::MAX - 1;

type Key = [TokenId; MAX_ORDER];

#[derive(Clone, Debug)]
pub struct NgramModel {
    order: usize,
    k: f64,
    ids: HashMap<char, TokenId>,
    ngrams: HashMap<Key, u64>,
    contexts: HashMap<Key, u64>,
}

fn key(tokens: &[TokenId]) -> Key {
    let mut k = [PAD; MAX_ORDER];
    k[..tokens.len()].copy_from_slice(tokens);
    k
}

impl NgramModel {
    /// Counts character n-grams over `sentences`, padding each with
    /// `order - 1` begin tokens and one end token. Whitespace is ignored and
    /// sentences without characters are skipped.
    pub fn train<'a, I>(sentences: I, order: usize, k: f64) -> Result<Self>
    where
        I: IntoIterator<Item = &'a str>,
    {
        check_params(order, k)?;
        let mut model = NgramModel {
            order,
            k,
            ids: HashMap::new(),
            ngrams: HashMap::new(),
            contexts: HashMap::new(),
        };
        let mut any = false;
        let mut tokens = Vec::new();
        for sentence in sentences {
            tokens.clear();
            tokens.extend(std::iter::repeat(BOS).take(order - 1));
            for ch in sentence.chars().filter(|c| !c.is_whitespace()) {
                let next = model.ids.len() as TokenId + 2;
                tokens.push(*model.ids.entry(ch).or_insert(next));
            }
            if tokens.len() == order - 1 {
                continue;
            }
            any = true;
            tokens.push(EOS);
            for window in tokens.windows(order) {
                *model.ngrams.entry(key(window)).or_insert(0) += 1;
                *model.contexts.entry(key(&window[..order - 1])).or_insert(0) += 1;
            }
        }
        if !any {
            return Err(Error::InsufficientData("no training sentence contains a character".into()));
        }
        Ok(model)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn smoothing(&self) -> f64 {
        self.k
    }

    /// |V|: distinct training characters plus the end token.
    pub fn vocab_size(&self) -> usize {
        self.ids.len() + 1
    }

    /// Characters seen in training, sorted.
    pub fn characters(&self) -> Vec<char> {
        let mut v: Vec<char> = self.ids.keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub(crate) fn id(&self, token: Token) -> TokenId {
        match token {
            Token::Bos => BOS,
            Token::Eos => EOS,
            Token::Char(c) => self.ids.get(&c).copied().unwrap_or(UNKNOWN),
        }
    }

    pub(crate) fn char_id(&self, c: char) -> TokenId {
        self.ids.get(&c).copied().unwrap_or(UNKNOWN)
    }

    /// Probability from token ids; `history` holds exactly `order - 1` ids.
    pub(crate) fn prob_ids(&self, history: &[TokenId], next: TokenId) -> f64 {
        debug_assert_eq!(history.len(), self.order - 1);
        let mut ngram = [PAD; MAX_ORDER];
        ngram[..history.len()].copy_from_slice(history);
        ngram[history.len()] = next;
        let joint = self.ngrams.get(&ngram).copied().unwrap_or(0);
        let ctx = self.contexts.get(&key(history)).copied().unwrap_or(0);
        (joint as f64 + self.k) / (ctx as f64 + self.k * self.vocab_size() as f64)
    }

    /// `P(next | context)`. Only the last `order - 1` context tokens are
    /// used; a shorter context is padded on the left with begin tokens.
    pub fn prob(&self, context: &[Token], next: Token) -> f64 {
        let n = self.order - 1;
        let mut history = vec![BOS; n];
        let take = context.len().min(n);
        for (slot, tok) in history[n - take..].iter_mut().zip(&context[context.len() - take..]) {
            *slot = self.id(*tok);
        }
        self.prob_ids(&history, self.id(next))
    }

    pub fn log_prob(&self, context: &[Token], next: Token) -> f64 {
        self.prob(context, next).ln()
    }

    /// Natural-log probability of a whole sentence, end token included.
    pub fn sentence_log_prob(&self, sentence: &str) -> f64 {
        let mut context = Vec::new();
        let mut total = 0.0;
        for ch in sentence.chars().filter(|c| !c.is_whitespace()) {
            total += self.log_prob(&context, Token::Char(ch));
            context.push(Token::Char(ch));
        }
        total + self.log_prob(&context, Token::Eos)
    }

    /// `exp(-log P / N)` over all predicted tokens (characters and end tokens).
    pub fn perplexity<'a, I>(&self, sentences: I) -> f64
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut log_prob = 0.0;
        let mut n = 0usize;
        for s in sentences {
            let chars = s.chars().filter(|c| !c.is_whitespace()).count();
            if chars == 0 {
                continue;
            }
            log_prob += self.sentence_log_prob(s);
            n += chars + 1;
        }
        (-log_prob / n as f64).exp()
    }

    fn token_of(&self, id: TokenId, names: &HashMap<TokenId, char>) -> Token {
        match id {
            BOS => Token::Bos,
            EOS => Token::Eos,
            other => Token::Char(names[&other]),
        }
    }

    /// Raw n-gram counts keyed by token sequence.
    pub fn counts(&self) -> BTreeMap<Vec<Token>, u64> {
        let names: HashMap<TokenId, char> = self.ids.iter().map(|(&c, &i)| (i, c)).collect();
        self.ngrams
            .iter()
            .map(|(k, &count)| (k[..self.order].iter().map(|&id| self.token_of(id, &names)).collect(), count))
            .collect()
    }

    /// Plain-text count dump: a header line, `order` and `k` lines, then one
    /// `tokens<TAB>count` line per n-gram in sorted order, tokens separated
    /// by spaces, `<s>` and `</s>` marking sentence boundaries.
    pub fn to_text(&self) -> String {
        let mut out = format!("{MODEL_MAGIC}\t{MODEL_FORMAT_VERSION}\norder\t{}\nk\t{}\n", self.order, self.k);
        let mut lines: Vec<String> = self
            .counts()
            .into_iter()
            .map(|(toks, count)| {
                let joined = toks.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                format!("{joined}\t{count}")
            })
            .collect();
        lines.sort();
        for l in lines {
            let _ = writeln!(out, "{l}");
        }
        out
    }

    pub fn from_text(source: &str) -> Result<Self> {
        let mut lines = source.lines().enumerate();
        let bad = |line: usize, message: &str| Error::ModelFormat { line: line + 1, message: message.into() };

        let (_, header) = lines.next().ok_or_else(|| bad(0, "empty model file"))?;
        match header.split_once('\t') {
            Some((MODEL_MAGIC, v)) if v.trim() == MODEL_FORMAT_VERSION.to_string() => {}
            Some((MODEL_MAGIC, v)) => return Err(bad(0, &format!("unsupported model format version {v}"))),
            _ => return Err(bad(0, "not a zhbraille n-gram model")),
        }
        let mut field = |name: &str| -> Result<(usize, String)> {
            let (i, line) = lines.next().ok_or_else(|| bad(usize::MAX - 1, "truncated header"))?;
            match line.split_once('\t') {
                Some((key, value)) if key == name => Ok((i, value.trim().to_owned())),
                _ => Err(bad(i, &format!("expected `{name}` line"))),
            }
        };
        let (i, order) = field("order")?;
        let order: usize = order.parse().map_err(|_| bad(i, "bad order"))?;
        let (i, k) = field("k")?;
        let k: f64 = k.parse().map_err(|_| bad(i, "bad smoothing constant"))?;
        check_params(order, k).map_err(|e| bad(i, &e.to_string()))?;

        let mut model = NgramModel {
            order,
            k,
            ids: HashMap::new(),
            ngrams: HashMap::new(),
            contexts: HashMap::new(),
        };
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (toks, count) = line.split_once('\t').ok_or_else(|| bad(i, "expected `tokens<TAB>count`"))?;
            let count: u64 = count.trim().parse().map_err(|_| bad(i, "bad count"))?;
            if count == 0 {
                return Err(bad(i, "zero count"));
            }
            let toks: Vec<Token> = toks
                .split(' ')
                .map(Token::parse)
                .collect::<Option<_>>()
                .ok_or_else(|| bad(i, "bad token"))?;
            if toks.len() != order {
                return Err(bad(i, "n-gram length does not match order"));
            }
            let ids: Vec<TokenId> = toks
                .iter()
                .map(|t| match *t {
                    Token::Bos => BOS,
                    Token::Eos => EOS,
                    Token::Char(c) => {
                        let next = model.ids.len() as TokenId + 2;
                        *model.ids.entry(c).or_insert(next)
                    }
                })
                .collect();
            if model.ngrams.insert(key(&ids), count).is_some() {
                return Err(bad(i, "duplicate n-gram"));
            }
            *model.contexts.entry(key(&ids[..order - 1])).or_insert(0) += count;
        }
        if model.ngrams.is_empty() {
            return Err(bad(0, "model has no n-grams"));
        }
        Ok(model)
    }
}

fn check_params(order: usize, k: f64) -> Result<()> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidArgument(format!("n-gram order must be 1 to {MAX_ORDER}, got {order}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("smoothing constant must be positive, got {k}")));
    }
    Ok(())
}
