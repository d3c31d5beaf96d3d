//! Byte-pair-encoding token counter compatible with the cl100k_base
//! vocabulary.
//!
//! Text is first cut into pieces by the pre-tokenization pattern. Each piece
//! is then encoded independently: start from single bytes and repeatedly
//! merge the adjacent pair whose concatenation has the lowest rank in the
//! vocabulary, until no adjacent pair forms a known token.

use std::collections::HashMap;
use std::fs;
use std::ops::Range;
use std::path::Path;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine as _;
use fancy_regex::Regex;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Published cl100k_base pre-tokenization pattern.
pub const CL100K_PATTERN: &str = r"'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}++|\p{N}{1,3}+| ?[^\s\p{L}\p{N}]++[\r\n]*+|\s++$|\s*[\r\n]|\s+(?!\S)|\s";

/// SHA-256 of the official `cl100k_base.tiktoken` rank file.
pub const CL100K_SHA256: &str = "223921b76ee99bde995b7ff738513eef100fb51d18c93597a113bcffe865b2a7";

pub type Rank = u32;

#[derive(Debug, Error)]
pub enum TokenizerError {
    #[error("malformed rank file at line {line}: {reason}")]
    MalformedRankFile { line: usize, reason: String },
    #[error("cannot read rank file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One encoded token and the input bytes it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub id: Rank,
    pub span: Range<usize>,
}

/// Immutable BPE vocabulary plus pre-tokenization pattern.
#[derive(Debug)]
pub struct TokenizerModel {
    name: String,
    ranks: HashMap<Vec<u8>, Rank>,
    pattern: Regex,
    /// First id handed to single bytes that have no rank of their own.
    fallback_base: Rank,
    content_hash: String,
}

/// Loads a `<base64 bytes> <rank>` rank file with the cl100k_base pattern.
pub fn load_model(rank_file: impl AsRef<Path>) -> Result<TokenizerModel, TokenizerError> {
    let path = rank_file.as_ref();
    let data = fs::read(path).map_err(|source| TokenizerError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model").to_owned();
    TokenizerModel::from_rank_bytes(&name, &data)
}

impl TokenizerModel {
    pub fn from_rank_bytes(name: &str, data: &[u8]) -> Result<Self, TokenizerError> {
        let malformed = |line: usize, reason: &str| TokenizerError::MalformedRankFile {
            line,
            reason: reason.to_owned(),
        };
        let text = std::str::from_utf8(data).map_err(|_| malformed(1, "file is not UTF-8"))?;
        let mut ranks = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.is_empty() {
                continue;
            }
            let (token, rank) = line
                .split_once(' ')
                .ok_or_else(|| malformed(line_no, "expected `<base64> <rank>`"))?;
            let bytes = BASE64
                .decode(token)
                .map_err(|_| malformed(line_no, "invalid base64 token"))?;
            if bytes.is_empty() {
                return Err(malformed(line_no, "empty token"));
            }
            let rank: Rank = rank
                .parse()
                .map_err(|_| malformed(line_no, "rank is not a non-negative integer"))?;
            if ranks.insert(bytes, rank).is_some() {
                return Err(malformed(line_no, "token listed twice"));
            }
        }
        if ranks.is_empty() {
            return Err(malformed(1, "no ranks"));
        }
        let fallback_base = ranks.values().max().copied().unwrap_or(0) + 1;
        Ok(Self {
            name: name.to_owned(),
            ranks,
            pattern: Regex::new(CL100K_PATTERN).expect("pattern compiles"),
            fallback_base,
            content_hash: hex(&Sha256::digest(data)),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of ranked tokens in the vocabulary.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank_of(&self, bytes: &[u8]) -> Option<Rank> {
        self.ranks.get(bytes).copied()
    }

    /// Hex SHA-256 of the rank file contents.
    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }

    pub fn count_tokens(&self, text: &str) -> usize {
        let mut n = 0;
        self.for_each_token(text, |_| n += 1);
        n
    }

    /// Tokens in order; their spans partition the input bytes.
    pub fn encode_with_spans(&self, text: &str) -> Vec<Token> {
        let mut out = Vec::new();
        self.for_each_token(text, |t| out.push(t));
        out
    }

    fn for_each_token(&self, text: &str, mut emit: impl FnMut(Token)) {
        let mut covered = 0;
        for m in self.pattern.find_iter(text) {
            // The pattern matches every character class, but a failed match
            // (backtrack limit) must still not lose bytes.
            let Ok(m) = m else { break };
            if m.start() > covered {
                self.encode_piece(text, covered..m.start(), &mut emit);
            }
            self.encode_piece(text, m.range(), &mut emit);
            covered = m.end();
        }
        if covered < text.len() {
            self.encode_piece(text, covered..text.len(), &mut emit);
        }
    }

    fn encode_piece(&self, text: &str, range: Range<usize>, emit: &mut impl FnMut(Token)) {
        let piece = &text.as_bytes()[range.clone()];
        if let Some(&id) = self.ranks.get(piece) {
            emit(Token { id, span: range });
            return;
        }
        let bounds = self.merge(piece);
        for pair in bounds.windows(2) {
            let bytes = &piece[pair[0]..pair[1]];
            let id = match self.ranks.get(bytes) {
                Some(&id) => id,
                None => {
                    debug_assert_eq!(bytes.len(), 1, "merged parts are always ranked");
                    self.fallback_base + Rank::from(bytes[0])
                }
            };
            emit(Token {
                id,
                span: range.start + pair[0]..range.start + pair[1],
            });
        }
    }

    /// Boundaries of the parts left after lowest-rank-first merging.
    /// Equal ranks merge leftmost first.
    fn merge(&self, piece: &[u8]) -> Vec<usize> {
        let mut bounds: Vec<usize> = (0..=piece.len()).collect();
        // pair_rank[i]: rank of the token formed by parts i and i+1.
        let pair_rank = |bounds: &[usize], i: usize| -> Option<Rank> {
            if i + 2 < bounds.len() {
                self.ranks.get(&piece[bounds[i]..bounds[i + 2]]).copied()
            } else {
                None
            }
        };
        let mut ranks: Vec<Option<Rank>> = (0..bounds.len()).map(|i| pair_rank(&bounds, i)).collect();
        loop {
            let best = ranks.iter().enumerate().filter_map(|(i, r)| r.map(|r| (r, i))).min();
            let Some((_, i)) = best else { break };
            bounds.remove(i + 1);
            ranks.remove(i + 1);
            ranks[i] = pair_rank(&bounds, i);
            if i > 0 {
                ranks[i - 1] = pair_rank(&bounds, i - 1);
            }
        }
        bounds
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
