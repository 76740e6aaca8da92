import pytest
import torch
from tokenizers import Tokenizer
from tokenizers.models import WordPiece
from tokenizers.normalizers import BertNormalizer
from tokenizers.pre_tokenizers import BertPreTokenizer
from tokenizers.processors import TemplateProcessing
from transformers import BertConfig, BertModel, PreTrainedTokenizerFast

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "a", "cat", "dog", "sat", "ran", "on", "mat", "rug",
    "play", "##ing", "##s", "big", ".", ",",
]

HIDDEN_SIZE = 32


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    """A tiny randomly initialized BERT checkpoint saved locally, so the
    full export path runs without any network access."""
    directory = tmp_path_factory.mktemp("tiny_bert")

    vocab = {w: i for i, w in enumerate(VOCAB)}
    backend = Tokenizer(WordPiece(vocab, unk_token="[UNK]"))
    backend.normalizer = BertNormalizer(lowercase=True)
    backend.pre_tokenizer = BertPreTokenizer()
    backend.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=backend,
        unk_token="[UNK]",
        pad_token="[PAD]",
        cls_token="[CLS]",
        sep_token="[SEP]",
        mask_token="[MASK]",
    )
    tokenizer.save_pretrained(directory)

    torch.manual_seed(1234)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=HIDDEN_SIZE,
        num_hidden_layers=4,
        num_attention_heads=4,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    BertModel(config).save_pretrained(directory)
    return str(directory)


def conllu_block(forms, no_space_before_last=True, range_line=False):
    lines = []
    if range_line:
        lines.append(f"1-2\t{forms[0]}{forms[1]}\t_\t_\t_\t_\t_\t_\t_\t_")
    for i, form in enumerate(forms, start=1):
        head = 0 if i == 1 else 1
        deprel = "root" if i == 1 else "dep"
        misc = "SpaceAfter=No" if no_space_before_last and i == len(forms) - 1 else "_"
        lines.append(f"{i}\t{form}\t_\t_\t_\t_\t{head}\t{deprel}\t_\t{misc}")
    return "\n".join(lines) + "\n\n"


@pytest.fixture(scope="session")
def corpus20(tmp_path_factory):
    """Twenty sentences with repeated forms, wordpiece splits, punctuation,
    SpaceAfter=No, and one multiword range line."""
    patterns = [
        ["the", "cat", "sat", "on", "a", "mat", "."],
        ["a", "dog", "ran", "."],
        ["the", "dog", "sat", "on", "the", "rug", "."],
        ["the", "big", "cat", "playing", "."],
        ["a", "cat", "plays", ",", "a", "dog", "plays", "."],
    ]
    blocks = []
    for i in range(20):
        forms = patterns[i % len(patterns)]
        blocks.append(conllu_block(forms, range_line=(i == 3)))
    path = tmp_path_factory.mktemp("fixture") / "base20.conllu"
    path.write_text("".join(blocks), encoding="utf-8")
    return str(path)
