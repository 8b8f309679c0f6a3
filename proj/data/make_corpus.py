#!/usr/bin/env python3
# Copyright The voxroute Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates data/corpus/desk80.json, the bundled 80-utterance replay corpus.

Each entry carries the reference transcript, a recognizer hypothesis (with
the kinds of slips small on-device recognizers make: digits for number words,
homophones, dropped words), the commands a correct system should execute,
and an idle-device metrics snapshot for the fixture metric provider.
"""

import json
import random
from pathlib import Path


def cmd(action, device, index):
    return {"action": action, "device": device, "index": index}


ON, OFF = "turn_on", "turn_off"

# (category, reference, hypothesis or None for a perfect transcript, expected)
SAMPLES = [
    # complete
    ("complete", "turn on light one", None, [cmd(ON, "light", 1)]),
    ("complete", "turn off light one", None, [cmd(OFF, "light", 1)]),
    ("complete", "turn on light two", "turn on light too", [cmd(ON, "light", 2)]),
    ("complete", "turn off light two", None, [cmd(OFF, "light", 2)]),
    ("complete", "turn on speaker one", None, [cmd(ON, "speaker", 1)]),
    ("complete", "turn off speaker one", "turn of speaker one", [cmd(OFF, "speaker", 1)]),
    ("complete", "switch on light one", None, [cmd(ON, "light", 1)]),
    ("complete", "switch off light one", "switch off light 1", [cmd(OFF, "light", 1)]),
    ("complete", "switch on light two", None, [cmd(ON, "light", 2)]),
    ("complete", "switch off light two", None, [cmd(OFF, "light", 2)]),
    ("complete", "switch on speaker one", "switch on speaker 1", [cmd(ON, "speaker", 1)]),
    ("complete", "switch off speaker one", None, [cmd(OFF, "speaker", 1)]),
    ("complete", "please turn on light one", None, [cmd(ON, "light", 1)]),
    ("complete", "please turn off light two", "please turn off light to", [cmd(OFF, "light", 2)]),
    ("complete", "turn on the light one", None, [cmd(ON, "light", 1)]),
    ("complete", "turn off the light two", None, [cmd(OFF, "light", 2)]),
    ("complete", "turn on speaker one now", None, [cmd(ON, "speaker", 1)]),
    ("complete", "turn off light one please", "turn off lite one please", [cmd(OFF, "light", 1)]),
    ("complete", "turn on light two please", None, [cmd(ON, "light", 2)]),
    ("complete", "could you turn on light one", None, [cmd(ON, "light", 1)]),
    ("complete", "could you turn off speaker one", "could you turn off speaker won", [cmd(OFF, "speaker", 1)]),
    ("complete", "turn light one off", "turn light one of", [cmd(OFF, "light", 1)]),
    ("complete", "turn on light one.", None, [cmd(ON, "light", 1)]),
    ("complete", "Turn off light two!", "turn off light 2", [cmd(OFF, "light", 2)]),
    # index variants
    ("index_variant", "turn on the light", None, [cmd(ON, "light", None)]),
    ("index_variant", "turn off the light", None, [cmd(OFF, "light", None)]),
    ("index_variant", "turn on the speaker", None, [cmd(ON, "speaker", None)]),
    ("index_variant", "turn off the speaker", "turn off the speakers", [cmd(OFF, "speaker", None)]),
    ("index_variant", "turn on the second light", None, [cmd(ON, "light", 2)]),
    ("index_variant", "turn on the first light", "turn on the first flight", [cmd(ON, "light", 1)]),
    ("index_variant", "turn off light number two", None, [cmd(OFF, "light", 2)]),
    ("index_variant", "turn on light number one", "turn on light number 1", [cmd(ON, "light", 1)]),
    ("index_variant", "turn on light three", None, []),
    ("index_variant", "turn off light five", "turn off light 5", []),
    ("index_variant", "switch on speaker two", "switch on speaker too", []),
    ("index_variant", "turn on the lights", None, [cmd(ON, "light", None)]),
    ("index_variant", "switch off the light", "switch of the light", [cmd(OFF, "light", None)]),
    ("index_variant", "turn on light 2", None, [cmd(ON, "light", 2)]),
    ("index_variant", "turn off the second light", "turn off the second light", [cmd(OFF, "light", 2)]),
    ("index_variant", "turn on my light", None, [cmd(ON, "light", None)]),
    # compound
    ("compound", "turn on light one and turn off light two", None,
     [cmd(ON, "light", 1), cmd(OFF, "light", 2)]),
    ("compound", "turn off light one and light two", None,
     [cmd(OFF, "light", 1), cmd(OFF, "light", 2)]),
    ("compound", "turn on light one and turn off speaker two", None,
     [cmd(ON, "light", 1)]),
    ("compound", "turn on speaker one and turn on light two", "turn on speaker one and turn on light too",
     [cmd(ON, "speaker", 1), cmd(ON, "light", 2)]),
    ("compound", "switch on light two and switch off speaker one", None,
     [cmd(ON, "light", 2), cmd(OFF, "speaker", 1)]),
    ("compound", "turn off light two and turn on light one", "turn off light two and turn on light 1",
     [cmd(OFF, "light", 2), cmd(ON, "light", 1)]),
    ("compound", "turn on light one and light two and speaker one", None,
     [cmd(ON, "light", 1), cmd(ON, "light", 2), cmd(ON, "speaker", 1)]),
    ("compound", "turn off speaker one and turn off light one", "turn off speaker one and turn of light one",
     [cmd(OFF, "speaker", 1), cmd(OFF, "light", 1)]),
    ("compound", "turn on the light and the speaker", None,
     [cmd(ON, "light", None), cmd(ON, "speaker", None)]),
    ("compound", "switch off light one and switch on light two", None,
     [cmd(OFF, "light", 1), cmd(ON, "light", 2)]),
    ("compound", "turn on light two and turn on the fan", None,
     [cmd(ON, "light", 2)]),
    ("compound", "turn off light one and then turn on speaker one", "turn off light one and then turn on speaker 1",
     [cmd(OFF, "light", 1), cmd(ON, "speaker", 1)]),
    ("compound", "turn on light one and turn on light two", "turn on light one and turn on light to",
     [cmd(ON, "light", 1), cmd(ON, "light", 2)]),
    ("compound", "turn off all the lights and the speaker", None,
     [cmd(OFF, "light", 1), cmd(OFF, "light", 2), cmd(OFF, "speaker", 1)]),
    # unsupported devices
    ("unsupported_device", "turn on the fan", None, []),
    ("unsupported_device", "turn off the tv", "turn off the t v", []),
    ("unsupported_device", "turn on the oven", None, []),
    ("unsupported_device", "switch on the heater", None, []),
    ("unsupported_device", "turn on the coffee machine", None, []),
    ("unsupported_device", "turn off the air conditioner", None, []),
    ("unsupported_device", "turn on fan two", "turn on fan to", []),
    ("unsupported_device", "open the garage door", None, []),
    ("unsupported_device", "lock the front door", None, []),
    ("unsupported_device", "turn on the radio", "turn on the radial", []),
    ("unsupported_device", "switch off the printer", None, []),
    ("unsupported_device", "turn off the dishwasher", None, []),
    # irrelevant or ambiguous
    ("irrelevant", "what is the weather", None, []),
    ("irrelevant", "tell me a joke", None, []),
    ("irrelevant", "hello there", "hello their", []),
    ("irrelevant", "what time is it", None, []),
    ("irrelevant", "play some music", None, []),
    ("irrelevant", "set a timer for five minutes", "set a timer for 5 minutes", []),
    ("irrelevant", "how are you", None, []),
    ("irrelevant", "good morning", None, []),
    ("irrelevant", "thank you", "thank you", []),
    ("irrelevant", "remind me to call mom", "remind me to call mum", []),
    ("irrelevant", "turn around", None, []),
    ("irrelevant", "what is on tv tonight", None, []),
    ("irrelevant", "off we go", "of we go", []),
    ("irrelevant", "", "", []),
]


def main():
    assert len(SAMPLES) == 80, len(SAMPLES)
    rng = random.Random(20251018)
    samples = []
    for i, (category, reference, hypothesis, expected) in enumerate(SAMPLES, start=1):
        samples.append({
            "sample_id": f"s{i:03d}",
            "category": category,
            "reference_transcript": reference,
            "hypothesis_transcript": reference.lower().rstrip(".!") if hypothesis is None else hypothesis,
            "expected_commands": expected,
            "metrics": {
                "cpu_pct": round(rng.uniform(22.0, 55.0), 1),
                "temp_c": round(rng.uniform(42.0, 49.5), 1),
                "latency_ms": round(rng.uniform(60.0, 125.0), 1),
            },
        })
    out = Path(__file__).resolve().parent / "corpus" / "desk80.json"
    out.write_text(json.dumps({"samples": samples}, indent=2) + "\n")
    print(f"wrote {len(samples)} samples to {out}")


if __name__ == "__main__":
    main()
