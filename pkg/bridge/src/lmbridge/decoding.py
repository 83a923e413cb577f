"""Token-by-token decoding against a loaded causal language model.

One loop serves both sampling modes. Temperature 0 selects the argmax token
each step (greedy, reproducible on fixed weights); any positive temperature
scales the logits and then samples from the nucleus, the smallest set of
tokens whose cumulative probability exceeds top_p. Decoding stops as soon as
the stop string appears in the decoded continuation, or after max_new_tokens
steps, whichever comes first. The returned text never contains the stop
string.
"""

import torch
from transformers import AutoModelForCausalLM, AutoTokenizer


def load_model_and_tokenizer(source: str):
    """Load a pretrained model plus tokenizer from a hub name or checkpoint dir."""
    tokenizer = AutoTokenizer.from_pretrained(source)
    model = AutoModelForCausalLM.from_pretrained(source)
    model.eval()
    return model, tokenizer


def set_dropout(model: torch.nn.Module, probability: float) -> None:
    for module in model.modules():
        if isinstance(module, torch.nn.Dropout):
            module.p = probability


def _context_limit(model) -> int:
    config = model.config
    for attr in ("n_positions", "max_position_embeddings"):
        limit = getattr(config, attr, None)
        if isinstance(limit, int) and limit > 0:
            return limit
    return 1024


def _nucleus_pick(probabilities: torch.Tensor, top_p: float) -> int:
    sorted_probs, sorted_ids = torch.sort(probabilities, descending=True)
    cumulative = torch.cumsum(sorted_probs, dim=-1)
    # keep tokens whose preceding mass is below top_p: the smallest prefix
    # whose total reaches it, and never fewer than one token
    keep = (cumulative - sorted_probs) < top_p
    kept = sorted_probs * keep
    position = torch.multinomial(kept / kept.sum(), num_samples=1)
    return int(sorted_ids[position])


@torch.no_grad()
def generate_text(
    model,
    tokenizer,
    prompt: str,
    *,
    max_new_tokens: int,
    top_p: float,
    temperature: float,
    stop_token: str,
) -> tuple[str, str]:
    """Generate a continuation; returns (text, finish_reason).

    finish_reason is "stop" when the stop string ended decoding and "length"
    when the token cap did.
    """
    input_ids = tokenizer(prompt, return_tensors="pt").input_ids
    # leave room for the continuation inside the model's context window
    window = _context_limit(model) - max_new_tokens
    if window < 1:
        window = 1
    if input_ids.shape[1] > window:
        input_ids = input_ids[:, -window:]

    generated: list[int] = []
    for _ in range(max_new_tokens):
        # full forward each step; request sizes here keep this cheap enough
        logits = model(input_ids).logits[0, -1, :]
        if temperature == 0:
            next_id = int(torch.argmax(logits))
        else:
            probabilities = torch.softmax(logits / temperature, dim=-1)
            next_id = _nucleus_pick(probabilities, top_p)
        generated.append(next_id)
        input_ids = torch.cat([input_ids, torch.tensor([[next_id]])], dim=1)
        text = tokenizer.decode(generated, skip_special_tokens=False)
        if stop_token in text:
            return text.split(stop_token, 1)[0], "stop"
    return tokenizer.decode(generated, skip_special_tokens=False), "length"
