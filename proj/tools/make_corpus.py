#!/usr/bin/env python3
"""Builds the deterministic fixture corpora under tests/fixtures/.

    python3 tools/make_corpus.py [--out-dir tests/fixtures] [--seed 20241016]

corpus_multilingual.txt  >= 1 MB, one document per line: Latin, Cyrillic,
                         Greek, Arabic, Hebrew, Devanagari, Thai, CJK, Korean,
                         emoji, source code and whitespace-heavy text.
train_small.txt          small English-heavy corpus for training tests.
worked_examples.txt      the canonical example strings, one per line.
"""

import argparse
import os
import random

SENTENCES = {
    "en": [
        "Lorem ipsum dolor sit amet.",
        "'Does it work?’ She asked.",
        "I'll be there at 10:30, won't I?",
        "They're sure we've seen it; he'd say it's fine.",
        "The population grew from 12345678 to 987654321 in 40 years.",
        "Don't panic!!! It's only 3.14159...",
        "WE'LL SEE WHAT THEY'VE DONE, SHE'D SAID.",
        "\"Quoted text\" — with an em dash – and an en dash.",
        "Email me at someone@example.com or call +1 (555) 010-9999.",
        "The 'quick' brown fox jumps over the 'lazy' dog's back.",
        "Version 2.0.1-rc3 shipped on 2024-10-16T12:00:00Z.",
        "Prices: $5.99, €12,50, £3 and ¥1000.",
        "rock'n'roll isn't dead, y'all'd agree 'tis true.",
        "Hello,world!How are you?I'm fine...thanks",
        "The Kelvin sign K and the long s ſ are odd letters.",
    ],
    "fr": [
        "L'été dernier, nous sommes allés à Paris.",
        "Qu'est-ce que c'est ? C'est l'histoire d'un garçon.",
        "Les élèves n'ont pas compris l'énoncé du problème n° 42.",
        "« Bonjour », dit-elle, « ça va très bien ».",
    ],
    "de": [
        "Die Straße ist 1.200 Meter lang und sehr schön.",
        "Größere Übungen fördern das Verständnis für Äpfel.",
        "Er sagte: „Wir treffen uns um 18 Uhr.“",
    ],
    "es": [
        "¿Dónde está la biblioteca? ¡Está allí!",
        "El niño comió 3 manzanas y 2½ peras.",
        "Mañana será otro día, señor Muñoz.",
    ],
    "vi": [
        "Tiếng Việt có nhiều dấu thanh điệu khác nhau.",
        "Tôi đã ăn phở ở Hà Nội năm 2019.",
    ],
    "ru": [
        "Привет, мир! Как дела?",
        "В 1961 году Юрий Гагарин полетел в космос.",
        "Съешь же ещё этих мягких французских булок, да выпей чаю.",
    ],
    "el": [
        "Η γρήγορη καφέ αλεπού πηδάει πάνω από τον σκύλο.",
        "Το έτος 2004 οι Ολυμπιακοί Αγώνες έγιναν στην Αθήνα.",
    ],
    "ar": [
        "مرحبا بالعالم! كيف حالك اليوم؟",
        "ولد في عام ١٩٧٥ في مدينة القاهرة.",
        "اللغة العربية جميلة، أليس كذلك؟",
    ],
    "he": [
        "שלום עולם! מה שלומך?",
        "בשנת 1948 הוכרזה המדינה.",
    ],
    "hi": [
        "नमस्ते दुनिया! आप कैसे हैं?",
        "भारत की जनसंख्या १४० करोड़ से अधिक है।",
        "हिन्दी एक सुंदर भाषा है।",
    ],
    "th": [
        "สวัสดีครับ ยินดีที่ได้รู้จัก",
        "ประเทศไทยมีประชากรประมาณ ๖๙ ล้านคน",
    ],
    "zh": [
        "我们今天去公园散步，天气非常好。",
        "中华人民共和国成立于1949年10月1日。",
        "这是一个测试句子，包含标点符号！还有问号？",
        "他说：“明天见。”然后就走了。",
    ],
    "ja": [
        "今日は良い天気ですね。　散歩に行きましょう。",
        "東京タワーの高さは３３３メートルです。",
        "「こんにちは」と彼女は言った。",
        "ｶﾀｶﾅとカタカナ、ひらがなと漢字が混ざっています。",
    ],
    "ko": [
        "안녕하세요! 만나서 반갑습니다.",
        "서울의 인구는 약 9,700,000명입니다.",
    ],
    "emoji": [
        "Great job 👍🏽 see you soon 😀🎉",
        "Family: 👨‍👩‍👧‍👦 flags: 🇯🇵🇺🇸 hearts: ❤️💙",
        "Math: ∑ x² ≤ ½ · π ≈ 3.14 ⇒ ∞",
        "Roman numerals Ⅻ and Ⅳ, circled ① ② ③, fractions ¼ ¾.",
        "Mathematical digits 𝟙𝟚𝟛 and full-width ０１２３.",
        "Combining: é à ñ ö and enclosing 1⃝.",
    ],
}

CODE = [
    "int main(int argc, char** argv) {\treturn argc > 1 ? 0 : 1; }",
    "for (std::size_t i = 0; i < n; ++i) sum += values[i] * 0x1F;",
    "def encode(self, text: str) -> list[int]:    return [ord(c) for c in text]",
    "if (x != nullptr && x->next) { x = x->next; }  // advance",
    "const re = /'s|'t|'re|'ve|'m|'ll|'d/gu;  console.log(re.test(\"it's\"));",
    "SELECT id, name FROM users WHERE created_at >= '2024-01-01' ORDER BY id;",
    "    x = {'key': [1, 2, 3], \"other\": None}\t# trailing comment   ",
    "#include <vector>\t\t#define MAX(a,b) ((a)>(b)?(a):(b))",
    "fn main() { let v: Vec<u8> = b\"hello\".to_vec(); println!(\"{:?}\", v); }",
    "<div class=\"row\"><span>&nbsp;Total:&nbsp;42</span></div>",
]

SPACES = [" ", "  ", "   ", "\t", " \t", "\u00a0", "\u3000", "\u2009", "\u202f",
          "\u2028", "\u2029", "\u000b", "\u000c", "\u0085", "\u1680", " \u00a0",
          "\r", " \r ", "\r\r"]

TRAILERS = ["", "", "", " ", "  ", "\t", "\u3000", " \u00a0 ", "\r", "\u2028"]


DIGITS = ["0123456789", "٠١٢٣٤٥٦٧٨٩", "०१२३४५६७८९", "０１２３４５６７８９"]


def vary(rng, sentence):
    r = rng.random()
    if r < 0.25:
        words = sentence.split(" ")
        rng.shuffle(words)
        sentence = " ".join(words)
    elif r < 0.40:
        digits = rng.choice(DIGITS)
        number = "".join(rng.choice(digits) for _ in range(rng.randint(1, 12)))
        sentence = f"{sentence} {number}{rng.choice(['', '.', ',', '%', 'th', ' km'])}"
    elif r < 0.48:
        sentence = sentence.upper()
    return sentence


def document(rng, languages):
    parts = []
    for _ in range(rng.randint(3, 18)):
        kind = rng.random()
        if kind < 0.12:
            parts.append(rng.choice(CODE))
        else:
            parts.append(vary(rng, rng.choice(SENTENCES[rng.choice(languages)])))
        parts.append(" " if rng.random() < 0.7 else rng.choice(SPACES))
    parts[-1] = rng.choice(TRAILERS)
    if rng.random() < 0.1:
        parts.insert(0, rng.choice(SPACES))
    text = "".join(parts)
    assert "\n" not in text
    return text


def write_lines(path, lines, min_bytes=0):
    data = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(data)
    size = os.path.getsize(path)
    assert size >= min_bytes, (path, size)
    return size


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default=os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures"))
    ap.add_argument("--seed", type=int, default=20241016)
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    rng = random.Random(args.seed)
    languages = sorted(SENTENCES)
    docs, total = [], 0
    while total < 1_150_000:
        d = document(rng, languages)
        docs.append(d)
        total += len(d.encode("utf-8")) + 1
    size = write_lines(os.path.join(args.out_dir, "corpus_multilingual.txt"), docs, 1_000_000)
    print(f"corpus_multilingual.txt: {len(docs)} documents, {size} bytes")

    rng = random.Random(args.seed + 1)
    train = [document(rng, ["en", "en", "en", "fr", "de", "zh"]) for _ in range(400)]
    size = write_lines(os.path.join(args.out_dir, "train_small.txt"), train)
    print(f"train_small.txt: {len(train)} documents, {size} bytes")

    worked = [
        "Lorem ipsum dolor sit amet.",
        "12345678",
        "'Does it work?’ She asked.",
    ]
    write_lines(os.path.join(args.out_dir, "worked_examples.txt"), worked)


if __name__ == "__main__":
    main()
