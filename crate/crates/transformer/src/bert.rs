use std::collections::HashMap;
use std::path::Path;

use candle_core::{DType, Device, IndexOp, Module, Tensor, D};
use candle_nn::{LayerNorm, Linear, VarBuilder};
use candle_transformers::models::bert::{BertModel, Config as BertConfig, HiddenAct};
use log::{debug, info};
use lsbert_core::mlm::{
    is_whole_word, LossRequest, MlmBackend, MlmPrediction, MlmQuery, Segment, TokenLoss, MASK,
};
use lsbert_core::{Error, Result};
use tokenizers::models::wordpiece::WordPiece;
use tokenizers::normalizers::BertNormalizer;
use tokenizers::pre_tokenizers::bert::BertPreTokenizer;
use tokenizers::Tokenizer;

use crate::files::{resolve_model_dir, ModelFiles};
use crate::TransformerConfig;

fn backend_err(e: impl std::fmt::Display) -> Error {
    Error::Backend(e.to_string())
}

/// `cls.predictions`: dense + activation + layer norm, then a projection
/// onto the vocabulary (usually tied to the input embeddings).
struct MlmHead {
    dense: Linear,
    act: HiddenAct,
    norm: LayerNorm,
    decoder: Tensor,
    bias: Tensor,
}

impl MlmHead {
    fn load(vb: VarBuilder, embeddings: Tensor, cfg: &BertConfig) -> candle_core::Result<Self> {
        let h = cfg.hidden_size;
        let pred = vb.pp("cls.predictions");
        let dense = candle_nn::linear(h, h, pred.pp("transform.dense"))?;
        let norm = candle_nn::layer_norm(h, cfg.layer_norm_eps, pred.pp("transform.LayerNorm"))?;
        let decoder = if pred.contains_tensor("decoder.weight") {
            pred.get((cfg.vocab_size, h), "decoder.weight")?
        } else {
            embeddings
        };
        let bias = if pred.contains_tensor("bias") {
            pred.get(cfg.vocab_size, "bias")?
        } else {
            pred.get(cfg.vocab_size, "decoder.bias")?
        };
        Ok(Self {
            dense,
            act: cfg.hidden_act,
            norm,
            decoder,
            bias,
        })
    }

    /// `hidden` is `[n, hidden]`; returns log-probabilities `[n, vocab]`.
    fn log_probs(&self, hidden: &Tensor) -> candle_core::Result<Tensor> {
        let x = self.dense.forward(hidden)?;
        let x = match self.act {
            HiddenAct::Gelu => x.gelu_erf()?,
            HiddenAct::GeluApproximate => x.gelu()?,
            HiddenAct::Relu => x.relu()?,
        };
        let x = self.norm.forward(&x)?;
        let logits = x.matmul(&self.decoder.t()?)?.broadcast_add(&self.bias)?;
        candle_nn::ops::log_softmax(&logits, D::Minus1)
    }
}

/// Old TF-converted checkpoints name layer-norm parameters gamma/beta and
/// some files omit the `bert.` prefix.
fn normalize_names(tensors: Vec<(String, Tensor)>) -> candle_core::Result<HashMap<String, Tensor>> {
    let has_prefix = tensors.iter().any(|(k, _)| k.starts_with("bert."));
    tensors
        .into_iter()
        .map(|(mut k, t)| {
            if let Some(stem) = k.strip_suffix(".gamma") {
                k = format!("{stem}.weight");
            } else if let Some(stem) = k.strip_suffix(".beta") {
                k = format!("{stem}.bias");
            }
            if !has_prefix && !k.starts_with("cls.") {
                k = format!("bert.{k}");
            }
            Ok((k, t.to_dtype(DType::F32)?))
        })
        .collect()
}

fn load_tensors(path: &Path, device: &Device) -> candle_core::Result<HashMap<String, Tensor>> {
    let raw: Vec<(String, Tensor)> = if path.extension().is_some_and(|e| e == "safetensors") {
        candle_core::safetensors::load(path, device)?.into_iter().collect()
    } else {
        candle_core::pickle::read_all(path)?
    };
    normalize_names(raw)
}

fn lowercase_vocab(files: &ModelFiles) -> bool {
    let Some(path) = &files.tokenizer_config else {
        return true;
    };
    std::fs::read_to_string(path)
        .ok()
        .and_then(|s| serde_json::from_str::<serde_json::Value>(&s).ok())
        .and_then(|v| v.get("do_lower_case").and_then(|b| b.as_bool()))
        .unwrap_or(true)
}

fn load_tokenizer(files: &ModelFiles) -> Result<Tokenizer> {
    let path = &files.tokenizer;
    if path.file_name().is_some_and(|n| n == "tokenizer.json") {
        return Tokenizer::from_file(path).map_err(backend_err);
    }
    let vocab = path.to_str().ok_or_else(|| backend_err("non UTF-8 vocabulary path"))?;
    let model = WordPiece::from_file(vocab)
        .unk_token("[UNK]".into())
        .build()
        .map_err(backend_err)?;
    let mut tokenizer = Tokenizer::new(model);
    tokenizer.with_normalizer(Some(BertNormalizer::new(true, true, None, lowercase_vocab(files))));
    tokenizer.with_pre_tokenizer(Some(BertPreTokenizer));
    Ok(tokenizer)
}

/// One encoded input: ids, segment ids and the positions to read out.
struct Encoded {
    ids: Vec<u32>,
    types: Vec<u32>,
    read: Vec<usize>,
}

/// A BERT masked language model.
pub struct BertBackend {
    model: BertModel,
    head: MlmHead,
    tokenizer: Tokenizer,
    vocab: Vec<String>,
    device: Device,
    cls: u32,
    sep: u32,
    mask: u32,
    pad: u32,
    max_len: usize,
    whole_word_scan: usize,
    batch_size: usize,
}

impl BertBackend {
    pub fn load(config: &TransformerConfig) -> Result<Self> {
        if config.device != "cpu" {
            return Err(Error::InvalidConfig(format!(
                "device {:?} is not supported; use \"cpu\"",
                config.device
            )));
        }
        if config.max_seq_len < 3 || config.batch_size == 0 {
            return Err(Error::InvalidConfig(
                "max_seq_len must be at least 3 and batch_size positive".into(),
            ));
        }
        let dir = resolve_model_dir(&config.model)?;
        let files = ModelFiles::in_dir(&dir)?;
        info!("loading masked language model from {}", dir.display());

        let cfg_text = std::fs::read_to_string(&files.config).map_err(|e| Error::io(&files.config, e))?;
        let bert_cfg: BertConfig = serde_json::from_str(&cfg_text)
            .map_err(|e| Error::parse(&files.config, e.line(), e.to_string()))?;

        let device = Device::Cpu;
        let tensors = load_tensors(&files.weights, &device).map_err(backend_err)?;
        let vb = VarBuilder::from_tensors(tensors, DType::F32, &device);
        let model = BertModel::load(vb.pp("bert"), &bert_cfg).map_err(backend_err)?;
        let embeddings = vb
            .get(
                (bert_cfg.vocab_size, bert_cfg.hidden_size),
                "bert.embeddings.word_embeddings.weight",
            )
            .map_err(backend_err)?;
        let head = MlmHead::load(vb, embeddings, &bert_cfg).map_err(backend_err)?;

        let tokenizer = load_tokenizer(&files)?;
        let size = tokenizer.get_vocab_size(true);
        let mut vocab = vec![String::new(); size.max(bert_cfg.vocab_size)];
        for (tok, id) in tokenizer.get_vocab(true) {
            if let Some(slot) = vocab.get_mut(id as usize) {
                *slot = tok;
            }
        }
        let id = |t: &str| {
            tokenizer
                .token_to_id(t)
                .ok_or_else(|| Error::Backend(format!("vocabulary has no {t} token")))
        };
        let (cls, sep, mask) = (id("[CLS]")?, id("[SEP]")?, id(MASK)?);
        let pad = tokenizer.token_to_id("[PAD]").unwrap_or(bert_cfg.pad_token_id as u32);

        Ok(Self {
            model,
            head,
            tokenizer,
            vocab,
            device,
            cls,
            sep,
            mask,
            pad,
            max_len: config.max_seq_len.min(bert_cfg.max_position_embeddings),
            whole_word_scan: config.whole_word_scan,
            batch_size: config.batch_size,
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    /// Subword ids of one word.
    fn pieces(&self, word: &str) -> Result<Vec<u32>> {
        if word == MASK {
            return Ok(vec![self.mask]);
        }
        let enc = self.tokenizer.encode(word, false).map_err(backend_err)?;
        Ok(enc.get_ids().to_vec())
    }

    /// Appends a segment; returns the first-piece offset of every word.
    fn push_segment(&self, words: &[String], type_id: u32, enc: &mut Encoded) -> Result<Vec<usize>> {
        let mut starts = Vec::with_capacity(words.len());
        for w in words {
            starts.push(enc.ids.len());
            let p = self.pieces(w)?;
            enc.types.extend(std::iter::repeat_n(type_id, p.len()));
            enc.ids.extend(p);
        }
        enc.ids.push(self.sep);
        enc.types.push(type_id);
        Ok(starts)
    }

    fn check_len(&self, enc: &Encoded) -> Result<()> {
        if enc.ids.len() > self.max_len {
            return Err(Error::SequenceTooLong {
                len: enc.ids.len(),
                max: self.max_len,
            });
        }
        Ok(())
    }

    fn encode_query(&self, query: &MlmQuery) -> Result<Encoded> {
        let mut enc = Encoded {
            ids: vec![self.cls],
            types: vec![0],
            read: Vec::new(),
        };
        let a = self.push_segment(&query.segment_a, 0, &mut enc)?;
        let b = match &query.segment_b {
            Some(seg) => Some(self.push_segment(seg, 1, &mut enc)?),
            None => None,
        };
        let starts = match query.target.segment {
            Segment::A => &a,
            Segment::B => b.as_ref().expect("validated"),
        };
        enc.read.push(starts[query.target.index]);
        self.check_len(&enc)?;
        Ok(enc)
    }

    /// The target's pieces are all masked and read back in order.
    fn encode_loss(&self, req: &LossRequest) -> Result<(Encoded, Vec<u32>)> {
        let target = self.pieces(&req.target)?;
        if target.is_empty() {
            return Err(Error::Backend(format!("{:?} produced no subword tokens", req.target)));
        }
        let mut enc = Encoded {
            ids: vec![self.cls],
            types: vec![0],
            read: Vec::new(),
        };
        for (i, w) in req.tokens.iter().enumerate() {
            if i == req.position {
                for _ in &target {
                    enc.read.push(enc.ids.len());
                    enc.ids.push(self.mask);
                    enc.types.push(0);
                }
            } else {
                let p = self.pieces(w)?;
                enc.types.extend(std::iter::repeat_n(0, p.len()));
                enc.ids.extend(p);
            }
        }
        enc.ids.push(self.sep);
        enc.types.push(0);
        self.check_len(&enc)?;
        Ok((enc, target))
    }

    /// Runs a padded batch and returns log-probabilities for every read
    /// position, in input order: `[total reads, vocab]`.
    fn run(&self, batch: &[&Encoded]) -> Result<Tensor> {
        let width = batch.iter().map(|e| e.ids.len()).max().unwrap_or(0);
        let n = batch.len();
        let mut ids = Vec::with_capacity(n * width);
        let mut types = Vec::with_capacity(n * width);
        let mut attn = Vec::with_capacity(n * width);
        let mut rows = Vec::new();
        for (b, e) in batch.iter().enumerate() {
            let pad = width - e.ids.len();
            ids.extend(e.ids.iter().copied().chain(std::iter::repeat_n(self.pad, pad)));
            types.extend(e.types.iter().copied().chain(std::iter::repeat_n(0, pad)));
            attn.extend(std::iter::repeat_n(1u32, e.ids.len()).chain(std::iter::repeat_n(0, pad)));
            rows.extend(e.read.iter().map(|&p| (b * width + p) as u32));
        }
        let run = || -> candle_core::Result<Tensor> {
            let ids = Tensor::from_vec(ids, (n, width), &self.device)?;
            let types = Tensor::from_vec(types, (n, width), &self.device)?;
            let attn = Tensor::from_vec(attn, (n, width), &self.device)?;
            let hidden = self.model.forward(&ids, &types, Some(&attn))?;
            let h = hidden.dim(D::Minus1)?;
            let flat = hidden.reshape((n * width, h))?;
            let idx = Tensor::from_vec(rows.clone(), rows.len(), &self.device)?;
            self.head.log_probs(&flat.index_select(&idx, 0)?)
        };
        run().map_err(backend_err)
    }
}

impl MlmBackend for BertBackend {
    fn predict_masked(&self, query: &MlmQuery, k: usize) -> Result<MlmPrediction> {
        if k == 0 {
            return Err(Error::InvalidConfig("k must be positive".into()));
        }
        query.validate()?;
        let enc = self.encode_query(query)?;
        let logp: Vec<f32> = self
            .run(&[&enc])?
            .i(0)
            .and_then(|t| t.to_vec1())
            .map_err(backend_err)?;

        let mut order: Vec<usize> = (0..logp.len()).collect();
        order.sort_by(|&a, &b| logp[b].total_cmp(&logp[a]).then(a.cmp(&b)));
        let scanned = self.whole_word_scan.min(order.len());
        let mut entries: Vec<(String, f64)> = Vec::with_capacity(k);
        for &id in &order[..scanned] {
            let tok = &self.vocab[id];
            if is_whole_word(tok) && !entries.iter().any(|(w, _)| w == tok) {
                entries.push((tok.clone(), (logp[id] as f64).exp()));
                if entries.len() == k {
                    break;
                }
            }
        }
        if entries.len() < k {
            return Err(Error::InsufficientWholeWords {
                wanted: k,
                found: entries.len(),
                scanned,
            });
        }
        debug!("{} -> {:?}", query.fingerprint(), entries);
        Ok(MlmPrediction { entries })
    }

    fn token_loss(&self, tokens: &[String], position: usize, target: &str) -> Result<TokenLoss> {
        let req = LossRequest {
            tokens: tokens.to_vec(),
            position,
            target: target.to_string(),
        };
        Ok(self.token_losses(std::slice::from_ref(&req))?.remove(0))
    }

    /// Multi-piece targets score the mean loss of their pieces, each read
    /// at its own mask.
    fn token_losses(&self, requests: &[LossRequest]) -> Result<Vec<TokenLoss>> {
        let mut out = Vec::with_capacity(requests.len());
        for chunk in requests.chunks(self.batch_size) {
            let mut encoded = Vec::with_capacity(chunk.len());
            for req in chunk {
                if req.position >= req.tokens.len() {
                    return Err(Error::PositionOutOfRange {
                        position: req.position,
                        len: req.tokens.len(),
                    });
                }
                if req.target.is_empty() {
                    return Err(Error::Backend("empty loss target".into()));
                }
                encoded.push(self.encode_loss(req)?);
            }
            let refs: Vec<&Encoded> = encoded.iter().map(|(e, _)| e).collect();
            let logp = self.run(&refs)?;
            let mut row = 0;
            for (_, target) in &encoded {
                let mut total = 0.0;
                for &piece in target {
                    let lp: f32 = logp
                        .i((row, piece as usize))
                        .and_then(|t| t.to_scalar())
                        .map_err(backend_err)?;
                    total -= lp as f64;
                    row += 1;
                }
                let unk = target.len() == 1 && self.vocab[target[0] as usize] == "[UNK]";
                out.push(TokenLoss {
                    nats: total / target.len() as f64,
                    decomposed: target.len() > 1 || unk,
                });
            }
        }
        Ok(out)
    }
}
