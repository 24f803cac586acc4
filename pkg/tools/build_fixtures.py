#!/usr/bin/env python3
"""Regenerate the bundled fixtures: mini corpus, lexicon, policy, KB docs.

The corpus is written as token lists tagged with a language (sh/en) so that
code-mix spans can be computed instead of hand-maintained. Output files are
deterministic; run from anywhere, paths resolve relative to the repo root.

Usage: python3 tools/build_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "shonachat" / "data"

SH = "sh"
EN = "en"


def sh(text: str) -> list[tuple[str, str]]:
    return [(tok, SH) for tok in text.split()]

def en(text: str) -> list[tuple[str, str]]:
    return [(tok, EN) for tok in text.split()]

def mix(*parts: list[tuple[str, str]]) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    for part in parts:
        out.extend(part)
    return out


# fmt: off
# Each utterance is [(token, lang), ...]; raw text is the tokens joined by
# single spaces. Slang tokens are kept punctuation-free so the whole-token
# lexicon substitution applies.
UTTERANCES: dict[str, list[list[tuple[str, str]]]] = {
    "greeting": [
        sh("wadii"),
        sh("wadii shamwari"),
        sh("wadii hako"),
        sh("wadii henyu"),
        sh("wadii sha"),
        sh("wadii zvako"),
        sh("wadii mhuri"),
        sh("wadii blaz"),
        sh("wadii mdara"),
        sh("wadii sisi"),
        sh("wadii mukoma"),
        sh("wadii tete"),
        sh("wadii sekuru"),
        sh("wadii mbuya"),
        sh("wadii mainini"),
        sh("wadii wangu"),
        sh("wadii bamkuru"),
        sh("wadii muzukuru"),
        sh("wadii shamwari yangu"),
        mix(sh("wadii"), en("bro")),
        sh("ko wadii"),
        mix(en("hey"), sh("wadii")),
        mix(en("hi"), sh("wadii hako")),
        sh("mhoro wadii zvako"),
        sh("hesi"),
        sh("hesi shamwari"),
        sh("hesi uri sei"),
        sh("hesi vanhu"),
        sh("hesi mhuri"),
        sh("mhoro"),
        sh("mhoro shamwari"),
        sh("mhoroi"),
        sh("mhoroi henyu"),
        sh("makadii"),
        sh("makadii henyu"),
        sh("makadii zvenyu"),
        mix(en("morning"), sh("makadii")),
        sh("makadini henyu"),
        sh("mangwanani"),
        sh("mangwanani shamwari"),
        sh("masikati"),
        sh("manheru shamwari"),
        en("hello"),
        mix(en("hello"), sh("uri sei")),
        en("hi guys"),
        en("hi hi"),
        en("gud morning"),
        en("good morning"),
        en("good morning everyone"),
        en("good afternoon"),
        en("good day"),
        en("howdy"),
        en("wassup"),
        en("hie everyone"),
        mix(en("hie"), sh("shamwari")),
        en("Hie swit mom"),
        sh("uri sei"),
        sh("uri sei hako"),
        sh("muri sei vanhu"),
    ],
    "gratitude": [
        sh("ndatenda"),
        sh("ndatenda zvikuru"),
        sh("ndatenda hangu"),
        sh("ndatenda mose"),
        sh("ndatenda nerubatsiro rwenyu"),
        sh("ndinotenda"),
        sh("ndinotenda shamwari"),
        sh("ndinotenda zvikuru"),
        sh("tatenda"),
        sh("tatenda zvikuru"),
        sh("tinotenda"),
        sh("tinokutendai"),
        sh("ndinokutendai zvikuru"),
        sh("mazvita"),
        sh("mazvita henyu"),
        sh("mazvita zvikuru"),
        sh("mazvita nebasa renyu"),
        sh("maita basa"),
        sh("maita basa shamwari"),
        sh("maita zvenyu"),
        sh("waita zvako"),
        sh("waita basa"),
        en("thank you"),
        en("thank you so much"),
        en("thank you my friend"),
        en("thanx"),
        en("thanx a lot"),
        en("thanks hey"),
        en("thanks for helping"),
        en("thanks a million"),
        mix(en("thank u"), sh("shamwari")),
        mix(en("cheers thank u"), sh("shamwari")),
        en("much appreciated"),
        en("i appreciate it"),
        en("thanks once again"),
        sh("ndatenda zvakanyanya"),
        mix(en("appreciated"), sh("shamwari")),
        mix(sh("ndatenda"), en("my friend")),
    ],
    "request": [
        sh("ndokumbirawo rubatsiro"),
        mix(sh("ndokumbira"), en("help")),
        sh("ndinokumbira ruzivo"),
        sh("ndokumbira kubvunza"),
        sh("ndokumbirawo nhamba yehofisi"),
        sh("ndokumbira mubvunzo"),
        sh("ndinokumbira kutaura nemumwe munhu"),
        sh("ndinoda rubatsiro"),
        sh("ndinoda kubatsirwa"),
        sh("ndibatsireiwo"),
        sh("ndibatsireiwo shamwari"),
        sh("ndibatsireiwo pano"),
        sh("mungandibatsirewo here"),
        sh("mungabatsira here"),
        sh("ndinodawo rubatsiro rwenyu"),
        en("can you help me"),
        en("help me plz"),
        en("please assist me"),
        en("may i get assistance"),
        en("i need help"),
        en("i need ur help"),
        en("assist me please"),
        en("can u assist"),
        en("help needed asap"),
        en("could you help"),
        sh("ndipeiwo ruzivo"),
        sh("mungandipewo here ruzivo"),
        sh("ndinoda kubvunza chimwe chinhu"),
        sh("ndinoda kuziva chimwe chinhu"),
        sh("nditsanangurireiwo izvi"),
        en("please can you explain"),
        en("i have a question"),
        en("one more question plz"),
        sh("ndine mubvunzo"),
        sh("ndingabvunza here"),
        sh("ndinoda kutaura nemunhu"),
        sh("ndiratidzeiwo nzira"),
        en("show me where to go"),
        mix(sh("nditumireiwo"), en("information")),
        en("quick question plz"),
        sh("ndokumbirawo tsananguro"),
        mix(sh("ndinoda"), en("details")),
        en("who can i talk to"),
    ],
    "religion": [
        sh("mune mufundisi here"),
        sh("mune mufundisi here pano"),
        sh("mune vafundisi here"),
        sh("mufundisi ariko here"),
        sh("ndinoda kuona mufundisi"),
        sh("ndoda kuona mufundisi nhasi"),
        sh("ndinoda kutaura nemufundisi"),
        sh("ndiani mufundisi wepano"),
        sh("mufundisi wedu ndiani"),
        sh("mufundisi anowanikwa riini"),
        sh("mufundisi anogara kupi"),
        sh("mufundisi vanobata riini"),
        sh("vafundisi vanowanikwa riini"),
        sh("mune chechi here pano"),
        sh("mune chechi here"),
        sh("chechi iripi"),
        sh("chechi yacho inosangana riini"),
        sh("chechi iri padyo iripi"),
        sh("ndingapinda chechi ipi"),
        sh("vakuru vechechi vanowanikwa sei"),
        sh("ndinoda kunamata"),
        sh("munamato uripo here"),
        sh("munamato wemangwanani uripo here"),
        sh("munamato wemanheru uripo here"),
        sh("kunamata kunotanga riini"),
        sh("tinonamata kupi"),
        en("where is the chapel"),
        en("is there a church service"),
        mix(en("chapel"), sh("iri kupi")),
        mix(en("church service"), sh("inotangira riini")),
        mix(en("sunday service"), sh("inotangira riini")),
        mix(sh("svondo rino kune"), en("service"), sh("here")),
        mix(en("church choir"), sh("iripo here")),
        mix(en("bible study"), sh("iripo here")),
        mix(sh("ndinoda"), en("bible study")),
        mix(en("bible"), sh("ndingaiwana kupi")),
        mix(en("prayer group"), sh("iripo here")),
        mix(sh("mune ma"), en("prayer meetings"), sh("here")),
        mix(en("prayer room"), sh("iripi")),
        mix(en("chaplain"), sh("aripo here")),
        mix(en("chaplain office"), sh("iri kupi")),
        mix(en("chaplain"), sh("anowanikwa riini")),
        mix(en("pastor"), sh("aripo here")),
        mix(en("pastor"), sh("anoparidza sei")),
        mix(en("pastor"), sh("anoparidza vhangeri riini")),
        sh("vhangeri rinoparidzwa kupi"),
        sh("kune misa here svondo rino"),
        sh("misa inotangira riini"),
        sh("misa iripo here svondo"),
        sh("misa yemangwanani iripo here"),
        mix(en("fellowship"), sh("yekunamata iripo here")),
        sh("vhangeri rinoparidzwa riini"),
    ],
    "finance": [
        sh("mubhadharo wakamira sei"),
        sh("mubhadharo uri pasi here"),
        sh("mubhadharo wesemester ungani"),
        sh("mubhadharo ungani"),
        sh("ndiudzeiwo mubhadharo"),
        sh("mubhadharo unobhadharwa riini"),
        mix(en("fees"), sh("dzakawanda here")),
        mix(en("school fees"), sh("dzinobhadharwa riini")),
        mix(en("fees"), sh("dzacho ingani")),
        en("how much are the fees"),
        mix(en("fees"), sh("dzeterm ingani")),
        mix(en("late fees"), sh("dziripo here")),
        mix(en("fees balance"), sh("yangu ingani")),
        en("how much is tuition"),
        mix(en("tuition fee"), sh("ingani")),
        mix(en("tuition"), sh("inobhadharwa riini")),
        mix(en("tuition"), sh("yacho yakamira sei")),
        mix(en("payment plan"), sh("iripo here")),
        mix(en("payment plan"), sh("inoshanda sei")),
        mix(en("payment"), sh("inotambirwa nzira ipi")),
        sh("ndobhadhara sei"),
        sh("ndobhadhara kupi"),
        sh("ndobhadhara riini"),
        sh("ndeipi nzira yekubhadhara"),
        mix(sh("ndingabhadhara ne"), en("bank transfer"), sh("here")),
        mix(en("scholarship"), sh("iripo here")),
        mix(en("scholarship"), sh("inowanikwa sei")),
        mix(sh("ma"), en("scholarship"), sh("aripo here")),
        mix(en("bursary"), sh("inowanikwa sei")),
        mix(en("bursary"), sh("inokwana here")),
        mix(en("loan"), sh("yevadzidzi iripo here")),
        mix(sh("ndingawana"), en("loan"), sh("here")),
        sh("chikwereti chevadzidzi chiripo here"),
        sh("chikwereti chinobhadharwa sei"),
        sh("muripo ungani"),
        sh("muripo unodiwa pakutanga ungani"),
        mix(en("deposit"), sh("inodiwa here")),
        mix(en("deposit"), sh("ingani")),
        mix(en("refund"), sh("inopihwa sei")),
        mix(en("installments"), sh("dzinobvumidzwa here")),
        mix(en("installments"), sh("dziripo here")),
        mix(sh("ndingawana"), en("financial aid"), sh("here")),
        mix(en("financial aid"), sh("inokwanisika here")),
        mix(en("billing statement"), sh("ndoiwana kupi")),
    ],
    "education": [
        mix(sh("ndinoda ku"), en("apply")),
        mix(sh("ndinoda ku"), en("apply"), sh("pa"), en("university")),
        mix(sh("ndinoda ku"), en("apply"), sh("kuchikoro")),
        mix(sh("ndoda ku"), en("apply")),
        mix(sh("ndoita"), en("apply"), sh("riini")),
        en("how do i apply"),
        en("i want to apply"),
        en("can i apply online"),
        mix(sh("ndingaite"), en("application"), sh("sei")),
        mix(en("application"), sh("inotumirwa kupi")),
        mix(en("application form"), sh("iri kupi")),
        mix(en("application deadline"), sh("riini")),
        mix(en("application"), sh("yangu yakasvika here")),
        mix(sh("ndotumira"), en("application"), sh("kupi")),
        mix(en("online application"), sh("iripo here")),
        sh("ndinoda kunyoresa"),
        sh("ndinoda kunyoresa degree"),
        sh("kunyoresa kunodiwa chii"),
        sh("ndinonyoresa sei"),
        mix(sh("mune ma"), en("program"), sh("api")),
        mix(sh("mune ma"), en("program"), sh("api ekudzidza")),
        mix(sh("ma"), en("program"), sh("enyu ndeapi")),
        mix(sh("ma"), en("program"), sh("aripo ndeapi")),
        mix(en("program"), sh("ipi yakanakira ini")),
        mix(en("masters program"), sh("iripo here")),
        mix(en("graduate program"), sh("inotora nguva ipi")),
        mix(en("data science program"), sh("iripo here")),
        mix(sh("ndeipi"), en("degree"), sh("yamunopa")),
        mix(sh("ma"), en("degree"), sh("amunopa ndeapi")),
        mix(sh("ndinoda kuita"), en("undergraduate degree")),
        mix(en("masters degree"), sh("iripo here")),
        mix(en("degree"), sh("yacho inotora nguva ipi")),
        mix(sh("ko ma"), en("course"), sh("aripo ndeapi")),
        mix(en("course outline"), sh("inowanikwa kupi")),
        mix(sh("ma"), en("evening classes"), sh("ekudzidza aripo here")),
        mix(en("short courses"), sh("dzekudzidza dziripo here")),
        mix(en("phd degree"), sh("inowanikwa here")),
        mix(en("phd programs"), sh("dziripo here")),
        mix(en("transfer"), sh("ye ma"), en("credits"), sh("inotenderwa here")),
        sh("kudzidza kunotanga riini"),
        mix(sh("ndinoda kuwedzera"), en("degree"), sh("yangu")),
        mix(sh("ndinoda kuverenga pa"), en("university"), sh("yenyu")),
        mix(en("graduate school"), sh("ndoipinda sei")),
        sh("chikoro chinovhura riini"),
        sh("skul yenyu inovhura riini"),
        sh("zvidzidzo zvinotanga riini"),
        mix(sh("zvinodiwa kupinda pa"), en("admission"), sh("ndezvipi")),
        mix(en("admission requirements"), sh("ndeapi")),
        mix(en("entry requirements"), sh("acho ndeapi")),
        mix(en("admission"), sh("inovhurwa riini")),
        mix(en("requirements"), sh("dzekupinda mu chikoro ndedzipi")),
        mix(en("transcript"), sh("inodiwa here pa"), en("admission")),
        mix(sh("ma"), en("credits"), sh("anodiwa pa"), en("admission"), sh("ndeapi")),
        mix(en("semester"), sh("yekudzidza inotanga riini")),
        mix(sh("ndinoda ku"), en("enrol"), sh("mu ma"), en("short courses"), sh("dzekudzidza")),
        mix(en("transfer"), sh("yema"), en("credits"), sh("kuchikoro inotenderwa here")),
        mix(sh("ndinoda kudzidza"), en("online")),
        mix(en("online classes"), sh("dziripo here")),
        mix(sh("mune"), en("evening classes"), sh("dzekudzidza here")),
    ],
    "farewell": [
        sh("tichaonana"),
        sh("tichaonana mangwana"),
        sh("tichaonana zvakare"),
        sh("zvakanaka tichaonana"),
        sh("tichaonana munguva"),
        sh("toonana mangwana"),
        sh("sara zvakanaka"),
        sh("sarai zvakanaka"),
        sh("chisarai"),
        sh("chisarai zvakanaka"),
        sh("famba zvakanaka"),
        sh("fambai zvakanaka"),
        sh("garai zvakanaka"),
        sh("ndaenda"),
        sh("ndaenda hangu"),
        sh("ndava kuenda"),
        sh("toenda isu"),
        sh("toonana ndaenda"),
        sh("ndapedza ndaenda"),
        en("bye"),
        en("bye bye"),
        en("goodbye"),
        en("good night"),
        en("goodnight"),
        en("see you later"),
        en("see u 2moro"),
        en("catch you later"),
        en("bye folks"),
        en("take care"),
        en("bye for now"),
        en("gotta go"),
        en("later guys"),
        en("see you later guys"),
        en("goodnight sleep well"),
        en("peace out"),
        mix(en("gud night"), sh("shamwari")),
        mix(en("good bye"), sh("shamwari")),
        sh("ndokuonai mangwana"),
        sh("ndokuonai"),
        sh("usiku hwakanaka"),
        sh("rota zvakanaka"),
        sh("tosangana mangwana"),
    ],
}
# fmt: on

LABELS = ["greeting", "gratitude", "request", "religion", "finance", "education", "farewell"]

LEXICON = {
    "hie": "hi",
    "swit": "sweet",
    "thanx": "thanks",
    "plz": "please",
    "u": "you",
    "ur": "your",
    "gud": "good",
    "sha": "shamwari",
    "ndoda": "ndinoda",
    "2moro": "tomorrow",
    "wassup": "hello",
    "skul": "school",
}

QUESTION_TOKENS = {
    "here", "sei", "riini", "kupi", "iripi", "ndeapi", "ndeipi", "ndezvipi",
    "ndedzipi", "ungani", "ingani", "mangani", "ndiani", "api", "ipi", "chii",
    "wadii", "makadii", "makadini",
}
QUESTION_LEADS = {"can", "may", "how", "where", "is", "do", "who", "mune", "muri", "uri", "ko"}
COMMAND_LEADS = {
    "help", "please", "assist", "show", "ndokumbirawo", "ndokumbira", "ndibatsireiwo",
    "ndipeiwo", "nditsanangurireiwo", "mungandipewo", "ndiratidzeiwo", "ndiudzeiwo",
    "nditumireiwo",
}

DEFAULT_SENTIMENT = {
    "greeting": "positive",
    "gratitude": "positive",
    "request": "neutral",
    "religion": "neutral",
    "finance": "neutral",
    "education": "neutral",
    "farewell": "neutral",
}
SENTIMENT_OVERRIDES = {
    "fees dzakawanda here": "negative",
    "help needed asap": "negative",
    "chikwereti chevadzidzi chiripo here": "negative",
    "muripo unodiwa pakutanga ungani": "negative",
    "tichaonana zvakare": "positive",
    "famba zvakanaka": "positive",
    "sara zvakanaka": "positive",
    "rota zvakanaka": "positive",
    "take care": "positive",
    "ndinoda kudzidza computer science": "positive",
}
FORMAL_TOKENS = {
    "admission", "requirements", "installments", "tuition", "payment",
    "application", "deposit", "refund", "assistance", "transcript", "billing",
}
HUMOROUS_TEXTS = {
    "Hie swit mom", "wassup", "howdy", "see u 2moro", "thanx a lot",
    "bye bye", "peace out", "gotta go", "hi hi",
}


def dialogue_act(tokens: list[str]) -> str:
    if any(t.lower() in QUESTION_TOKENS for t in tokens):
        return "question"
    if tokens[0].lower() in COMMAND_LEADS:
        return "command"
    if tokens[0].lower() in QUESTION_LEADS:
        return "question"
    return "statement"


def tone(raw: str, tokens: list[str]) -> str:
    if raw in HUMOROUS_TEXTS:
        return "humorous"
    if any(t.lower() in FORMAL_TOKENS for t in tokens):
        return "formal"
    return "friendly"


def code_mix_spans(tagged: list[tuple[str, str]]) -> list[dict]:
    """Maximal same-language runs, as character spans into the joined text.

    Monolingual utterances carry no spans; only genuinely code-mixed text is
    annotated, one span per run, word vs phrase by run length.
    """
    langs = {lang for _, lang in tagged}
    if len(langs) < 2:
        return []
    positions = []
    offset = 0
    for tok, lang in tagged:
        positions.append((offset, offset + len(tok), lang))
        offset += len(tok) + 1
    spans = []
    run_start, run_end, run_lang, run_len = positions[0][0], positions[0][1], positions[0][2], 1
    for start, end, lang in positions[1:]:
        if lang == run_lang:
            run_len += 1
            run_end = end
        else:
            spans.append({"start": run_start, "end": run_end,
                          "language": "shona" if run_lang == SH else "english",
                          "unit": "word" if run_len == 1 else "phrase"})
            run_start, run_end, run_lang, run_len = start, end, lang, 1
    spans.append({"start": run_start, "end": run_end,
                  "language": "shona" if run_lang == SH else "english",
                  "unit": "word" if run_len == 1 else "phrase"})
    return spans


def build_corpus() -> list[dict]:
    records = []
    counter = 0
    for label in LABELS:
        for tagged in UTTERANCES[label]:
            counter += 1
            tokens = [tok for tok, _ in tagged]
            raw = " ".join(tokens)
            records.append(
                {
                    "id": f"u{counter:04d}",
                    "raw_text": raw,
                    "intent": label,
                    "sentiment": SENTIMENT_OVERRIDES.get(raw, DEFAULT_SENTIMENT[label]),
                    "dialogue_act": dialogue_act(tokens),
                    "code_mix": code_mix_spans(tagged),
                    "tone": tone(raw, tokens),
                }
            )
    return records


POLICY = {
    "threshold": 0.5,
    "exit_commands": ["exit"],
    "fallback_reply": (
        "Ndine urombo, handina kunyatsonzwisisa mubvunzo wenyu. "
        "Edzai kubvunza neimwe nzira. (Sorry, I did not quite understand.)"
    ),
    "triggers": ["apply", "application", "kunyoresa"],
    "rules": {
        "greeting": [
            "Hesi shamwari! Uri sei hako?",
            "Mhoro! Ndingakubatsira nei nhasi?",
        ],
        "gratitude": [
            "Unotendwa shamwari! Bvunza zvimwe kana uchida.",
            "You are welcome! Ndiripo kukubatsira.",
        ],
        "religion": [
            "Department contact link: https://chaplaincy.example.edu/contact",
        ],
        "farewell": [
            "Zvakanaka, tichaonana zvakare!",
        ],
    },
    "workflow": {
        "slots": [
            {"name": "name", "prompt": "Ndokumbirawo zita renyu rizere. (What is your full name?)"},
            {"name": "education", "prompt": "Makadzidza kusvika papi? (What is your education background?)"},
            {"name": "program_of_interest", "prompt": "Ndeipi program yamunofarira? (Which program interests you?)"},
        ],
        "completion": (
            "Ndatenda {name}! Application yenyu yagamuchirwa. "
            "Education: {education}. Program: {program_of_interest}. "
            "Tichakubatai munguva pfupi."
        ),
    },
}

DIALOGUE_SCRIPT = ["wadii", "mune mufundisi here", "pace inoita mari?", "ndinoda ku apply", "exit"]

KB_DOCS = {
    "graduate_programs.md": """# Graduate Programs

The university offers graduate programs in Computer Science, Data Science, Information Systems, and Software Engineering. Each program combines taught modules with an applied capstone project. Full-time students typically finish in three to four semesters.

The MS in Computer Science covers algorithms, distributed systems, and machine learning. The MS in Data Science focuses on statistics, large-scale data processing, and visualization. Both accept students from non-computing backgrounds through bridge courses.

Evening and online sections are available for most graduate courses, so working students can keep their jobs while studying. Program advisors help each student plan a schedule that fits.
""",
    "admissions.md": """# Admissions

Applications are submitted through the online portal. A complete application includes transcripts, a statement of purpose, and one recommendation letter. There is no application fee for early submissions.

Admission decisions for graduate programs are made on a rolling basis. Most applicants hear back within four weeks of submitting a complete file. International students should apply at least one semester ahead to allow time for visa processing.

To apply, create an account on the portal, choose your program of interest, and upload the required documents. The admissions office answers questions by email and holds weekly drop-in sessions.
""",
    "tuition_aid.md": """# Tuition and Financial Aid

Tuition is charged per credit hour and varies by program; the bursar publishes the current rate sheet each academic year. Fees cover registration, technology, and student activities.

Payment plans let students spread a semester's charges over several monthly installments with no interest. The bursar's office sets up plans at the start of each term.

Scholarships and graduate assistantships are available for strong applicants. Assistantships include a tuition waiver and a stipend in exchange for research or teaching support. Financial aid counselors help students combine loans, scholarships, and work-study.
""",
    "campus_life.md": """# Campus Life

Student clubs cover academic interests, cultures, sports, and volunteering. New students are matched with a peer mentor during their first semester.

The campus ministry and chaplaincy welcome students of all faiths. Weekly services, prayer groups, and quiet rooms are available, and the chaplaincy office can connect students with local congregations.

Housing, dining, and health services are managed through the student services portal. Counseling appointments are free for enrolled students.
""",
}


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "kb").mkdir(exist_ok=True)

    records = build_corpus()
    lines = [json.dumps({"labels": LABELS})]
    lines += [json.dumps(r, ensure_ascii=False) for r in records]
    (DATA / "mini_corpus.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")

    lex_lines = [f"{slang}\t{standard}" for slang, standard in sorted(LEXICON.items())]
    (DATA / "slang_lexicon.tsv").write_text("\n".join(lex_lines) + "\n", encoding="utf-8")

    (DATA / "policy.json").write_text(json.dumps(POLICY, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")

    (DATA / "dialogue_script.txt").write_text("\n".join(DIALOGUE_SCRIPT) + "\n", encoding="utf-8")

    for name, body in KB_DOCS.items():
        (DATA / "kb" / name).write_text(body, encoding="utf-8")

    counts = {label: len(UTTERANCES[label]) for label in LABELS}
    print(f"wrote {sum(counts.values())} utterances: {counts}")
    print(f"lexicon entries: {len(LEXICON)}; kb docs: {len(KB_DOCS)}")


if __name__ == "__main__":
    main()
