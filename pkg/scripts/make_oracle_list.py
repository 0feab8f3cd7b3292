"""Regenerate tests/data/oracle_words.tsv from the Pyphen reference hyphenator.

Each line is ``group<TAB>word<TAB>segmentation`` with syllables joined by '-'.
The Italian and transliterated lists below are the pinned check set; Pyphen
(with its bundled it_IT dictionary, left=right=2) supplies the expected
segmentation.

    python scripts/make_oracle_list.py tests/data/oracle_words.tsv
"""

import sys

import pyphen

ITALIAN = """
acqua albero amico amore anima anno aprire arancia argento aria armadio
arte attenzione autunno avventura bambino bandiera barca bellezza biblioteca
bicchiere bicicletta bosco braccio bottiglia buono caffe calcio caldo camera
camicia campagna cane canzone capello carta casa castello cavallo cena cervello
chiave chiesa cielo cinema cipolla citta collina colore coltello computer
coniglio coraggio corpo cucina cuore cuscino destino dialogo difficile domani
donna dottore dolce edificio elefante energia entrare esempio estate fabbrica
famiglia farfalla fatica festa figlio finestra fiore fiume foglia formaggio
fortuna fratello freddo fuoco gatto gelato generale giardino ginocchio giorno
giovane gita giustizia gnocchi grazie guerra immagine inverno isola lago
lampada latte lavoro legge lettera libro luce luna macchina madre maglione
mangiare mano mare marito matita medico memoria mercato mestiere montagna
morte musica naso natura nave neve nipote nome notte nuvola occhio oggetto
ombrello orologio ospedale pace padre paese pagina palazzo pane pantaloni
parola passaggio patata paura penna pensiero persona pesce piazza pioggia
pittura poesia polizia pomodoro ponte porta posta pranzo primavera problema
quaderno quadro ragazzo ragione regalo ricordo risposta ristorante sabbia
sale scarpa scatola scienza scuola sedia segreto semaforo sentiero settimana
sguardo silenzio sinistra soldi sole sorella specchio spiaggia stagione stanza
stella storia strada studente tavolo teatro telefono tempesta tempo terra
tesoro testa treno tristezza uccello ufficio uomo uovo vacanza valigia vento
verde verita vestito viaggio villaggio vino violino vita voce zucchero zaino
psicologia pneumatico aiuola aereo aiuto paio gioia maestro poeta teatrale
anticostituzionale sbagliare sdraio sgabello sfruttare transatlantico
""".split()

TRANSLITERATED = """
ami tumi amar tomar bhalobashi bhalo basha bangla gaan mon prem shona shonar
akash bhalobasha jibon maa baba bondhu chokh chand taara nodi pakhi phool
brishti megh raat din shokal bikel shondhya ghum swapno kotha mukh haat
hridoy dukkho sukh hashi kanna pothe ghor bari dure kache amra tomra ora
keno kokhon kothay kemon achhe chilo hobe jabo ashbo dekho shuno bolo
kori korbo korechi bhulbo bhule mone pore jaani jani chai chaina nei ache
ekta ekdin shudhu aaj kal ekhon tokhon abar sathe bhitore baire upore niche
jhor batash bosonto borsha sharat hemonto sheet grishmo shagor pahar
gaach rong alo andhar tara chhobi kobita golpo shur taal lay nachi gaai
saranghae saranghaeyo naega neoreul neoui nae nan na neo uri urineun
bogo bogoshipda sipeo sipda haru haneul byeol dal sarang sarangi gaseum
nunmul useum kkum kkot baram bit eodum seulpeum gippeum maeum saram
yeoja namja chingu eomma appa oppa unnie noona hyung dongsaeng
annyeong gamsahamnida mianhae gwaenchana jeongmal jinjja aniya geurae
eonjena hangsang ajik imi dasi tto hamkke honja yeogi jeogi eodiga
meolli gakkai pyeongsaeng yeongwonhi cheoeum majimak sijak kkeut
nareul nal naneun neon neoneun geudae geudaeneun urin uriga jigeum
oneul naeil eoje bam achim jeonyeok haessal nunbusin areumdaun
yeppeun meotjin joheun nappeun apeun himdeun oeroun haengbokhan
doraol tteonaji tteonaga gidarilge gieokhae ijeo ijeul chajeul
""".split()


def main(out_path):
    ref = pyphen.Pyphen(lang="it_IT", left=2, right=2)
    seen = set()
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(f"# expected segmentations from pyphen {pyphen.__version__}, it_IT, left=2 right=2\n")
        for group, words in (("italian", ITALIAN), ("translit", TRANSLITERATED)):
            for w in words:
                if w in seen:
                    continue
                seen.add(w)
                fh.write(f"{group}\t{w}\t{ref.inserted(w, hyphen='-')}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/oracle_words.tsv")
