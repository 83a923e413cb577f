"""Shared fixtures: a tiny randomly initialized checkpoint, built offline.

Tests never download weights. The checkpoint is a 2-layer GPT-2 over a
whitespace word-level vocabulary small enough that every test runs on CPU in
milliseconds, saved in the standard pretrained layout so the package loads
it exactly the way it would load the real medium model.
"""

import time

import pytest
import torch
from tokenizers import Tokenizer
from tokenizers.models import WordLevel
from tokenizers.pre_tokenizers import Whitespace
from transformers import GPT2Config, GPT2LMHeadModel, PreTrainedTokenizerFast

WORDS = [
    "[UNK]", "<|endoftext|>", "[PAD]",
    "what", "does", "at", "hop", "1", "2", "3", "-", "?", ".", ",",
    "more", "less", "is", "helped", "hurt", "by", "helps", "hurts",
    "sunlight", "rain", "clouds", "plants", "grow", "taller", "roots",
    "absorb", "water", "soil", "the", "a", "forest", "floor", "light",
    "reaches", "spring", "follows", "in", "leaves", "through", "shade",
]


def build_checkpoint(directory) -> str:
    vocab = {word: index for index, word in enumerate(WORDS)}
    core = Tokenizer(WordLevel(vocab=vocab, unk_token="[UNK]"))
    core.pre_tokenizer = Whitespace()
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=core,
        unk_token="[UNK]",
        eos_token="<|endoftext|>",
        pad_token="[PAD]",
    )
    config = GPT2Config(
        vocab_size=len(vocab),
        n_positions=64,
        n_embd=32,
        n_layer=2,
        n_head=2,
        bos_token_id=vocab["<|endoftext|>"],
        eos_token_id=vocab["<|endoftext|>"],
    )
    torch.manual_seed(20260816)
    model = GPT2LMHeadModel(config)
    model.save_pretrained(directory)
    tokenizer.save_pretrained(directory)
    return str(directory)


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory) -> str:
    return build_checkpoint(tmp_path_factory.mktemp("tiny-model"))


def wait_healthy(client, timeout: float = 30.0):
    """Poll /health until the background load finishes."""
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        response = client.get("/health")
        if response.status_code == 200:
            return response
        time.sleep(0.05)
    raise AssertionError("service never became healthy")
