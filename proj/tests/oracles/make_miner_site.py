"""Write the mirrored-site fixture used by the miner tests (tests/data/miner_site)."""
import os
import sys

ROOT = sys.argv[1] if len(sys.argv) > 1 else "tests/data/miner_site"

def page(title, heading, paragraphs, items, link_text, link_href):
    body = [f"<h1>{heading}</h1>"]
    body += [f"<p>{p}</p>" for p in paragraphs]
    body.append("<ul>" + "".join(f"<li>{i}</li>" for i in items) + "</ul>")
    body.append(f'<p><a href="{link_href}">{link_text}</a></p>')
    return ("<html><head><title>" + title + "</title></head><body>\n" + "\n".join(body) + "\n</body></html>\n")

def table_page(title, heading, cells, link_text, link_href):
    rows = "".join(f"<tr><td>{a}</td><td>{b}</td></tr>" for a, b in cells)
    return ("<html><head><title>" + title + "</title></head><body>\n<h1>" + heading + "</h1>\n<table>" + rows +
            "</table>\n" + f'<p><a href="{link_href}">{link_text}</a></p>\n</body></html>\n')

EN_ABOUT = page(
    "About us", "About our company",
    ["Our company was founded in the old harbour district of the city more than forty years ago. "
     "We build small wooden boats for families who want to spend their weekends on the water.",
     "Every boat is designed and assembled by hand in our own workshop, and we are proud that many of "
     "our customers come back to us when their children grow up and want a boat of their own."],
    ["Hand built wooden boats", "Repairs and maintenance", "Sailing lessons for children"],
    "Version française", "about_fr.html")
FR_ABOUT = page(
    "À propos", "À propos de notre entreprise",
    ["Notre entreprise a été fondée dans le vieux quartier du port de la ville il y a plus de quarante ans. "
     "Nous construisons de petits bateaux en bois pour les familles qui veulent passer leurs week-ends sur l'eau.",
     "Chaque bateau est dessiné et assemblé à la main dans notre propre atelier, et nous sommes fiers que "
     "beaucoup de nos clients reviennent nous voir quand leurs enfants grandissent et veulent leur propre bateau."],
    ["Bateaux en bois faits à la main", "Réparations et entretien", "Leçons de voile pour les enfants"],
    "English version", "about_en.html")

EN_PRODUCTS = page(
    "Products", "Our boats",
    ["The small dinghy is our most popular model. It is light enough to be carried by two adults and it is "
     "stable enough for a first sailing trip with young children on a calm lake.",
     "The larger cruiser has a covered cabin with two beds, a small kitchen and enough storage for a week "
     "of travel along the coast. It can be ordered with an electric engine."],
    ["Dinghy, four metres", "Cruiser, seven metres", "Rowing boat, three metres"],
    "En français", "../fr/products.html")
FR_PRODUCTS = page(
    "Produits", "Nos bateaux",
    ["Le petit dériveur est notre modèle le plus populaire. Il est assez léger pour être porté par deux "
     "adultes et assez stable pour une première sortie à la voile avec de jeunes enfants sur un lac calme.",
     "Le grand voilier de croisière possède une cabine couverte avec deux lits, une petite cuisine et assez "
     "de rangement pour une semaine de voyage le long de la côte. Il peut être commandé avec un moteur électrique."],
    ["Dériveur, quatre mètres", "Voilier, sept mètres", "Bateau à rames, trois mètres"],
    "In English", "../en/products.html")

EN_CONTACT = page(
    "Contact", "How to reach us",
    ["You can visit the workshop from Monday to Saturday between nine in the morning and six in the evening. "
     "Please call before you come if you would like to see a boat that is still being built.",
     "For questions about orders, repairs or lessons you can also write to us, and we will answer within "
     "two working days. We speak English, French and a little Italian."],
    ["Telephone during opening hours", "Letters to the harbour office", "Visits by appointment"],
    "Version française", "contact-fr.html")
FR_CONTACT = page(
    "Contact", "Comment nous joindre",
    ["Vous pouvez visiter l'atelier du lundi au samedi entre neuf heures du matin et six heures du soir. "
     "Merci de nous appeler avant de venir si vous souhaitez voir un bateau qui est encore en construction.",
     "Pour les questions sur les commandes, les réparations ou les leçons, vous pouvez aussi nous écrire, et "
     "nous répondrons dans les deux jours ouvrables. Nous parlons anglais, français et un peu italien."],
    ["Téléphone pendant les heures d'ouverture", "Lettres au bureau du port", "Visites sur rendez-vous"],
    "English version", "contact-en.html")

# Decoy 1: counterpart exists but carries far less text (length filter).
EN_NEWS = page(
    "News", "News from the workshop",
    ["This spring we finished the largest boat we have ever built, a seven metre cruiser for a family from "
     "the north coast. It took our team almost five months of careful work, and the launch day was attended "
     "by more than a hundred friends and neighbours from the harbour district.",
     "We also started a new series of sailing lessons for children between eight and twelve years old. The "
     "lessons take place every Saturday morning on the lake, and the first group has already learned how to "
     "tie the most important knots and how to steer a dinghy against the wind."],
    ["Launch of the new cruiser", "Sailing lessons for children", "Open workshop day in June"],
    "Version française", "news_fr.html")
FR_NEWS = page(
    "Actualités", "Actualités",
    ["Ce printemps nous avons terminé un grand voilier de sept mètres.",
     "Nouvelles leçons de voile le samedi."],
    ["Nouveau voilier", "Leçons", "Atelier ouvert"],
    "English version", "news_en.html")

# Decoy 2: similar amount of text but a different page structure.
EN_HISTORY = page(
    "History", "Our history",
    ["The workshop was opened by two brothers who had learned boat building from their grandfather. In the "
     "first years they repaired fishing boats for the local fleet and built only a few new boats each winter.",
     "When the fishing fleet became smaller, the brothers turned to family boats and sailing dinghies, and "
     "the workshop slowly grew into the company it is today, with twelve people working in the harbour."],
    ["Founded by two brothers", "Repairs for the fishing fleet", "Family boats since the eighties"],
    "Version française", "history_fr.html")
FR_HISTORY = table_page(
    "Histoire", "Notre histoire",
    [("Ouverture", "L'atelier a été ouvert par deux frères qui avaient appris la construction de bateaux auprès de leur grand-père."),
     ("Premières années", "Ils réparaient les bateaux de pêche de la flotte locale et construisaient quelques bateaux chaque hiver."),
     ("Changement", "Quand la flotte de pêche est devenue plus petite, les frères se sont tournés vers les bateaux de famille."),
     ("Aujourd'hui", "L'atelier est devenu une entreprise de douze personnes qui travaillent dans le port."),
     ("Voile", "Les dériveurs et les leçons de voile font maintenant partie de notre travail quotidien.")],
    "English version", "history_en.html")

# Decoy 3: the "French" page is written in English.
EN_TEAM = page(
    "Team", "Our team",
    ["Twelve people work in the workshop today. Most of them are boat builders, but the team also includes "
     "a sail maker, an engine mechanic and two teachers who give the sailing lessons on the lake.",
     "Many members of the team started as apprentices in our workshop and stayed with us for many years. "
     "We believe that good boats are built by people who enjoy their work and know each other well."],
    ["Boat builders", "Sail maker and mechanic", "Sailing teachers"],
    "Version française", "team_fr.html")
FR_TEAM_IN_ENGLISH = page(
    "Team", "The people behind our boats",
    ["Twelve people are working in the workshop this year. Most of them build boats, but the group also has "
     "a sail maker, a mechanic for engines and two teachers who run the sailing lessons on the lake.",
     "Several members of the group began as apprentices in the workshop and stayed for many years. We think "
     "that the best boats are made by people who like their work and who know each other very well."],
    ["People who build boats", "Sails and engines", "Teachers for the lessons"],
    "English version", "team_en.html")

INDEX = page(
    "Welcome", "Welcome to the harbour workshop",
    ["Wooden boats, repairs and sailing lessons in the old harbour."],
    ["About us", "Products", "Contact"],
    "Version française", "about_fr.html")

FILES = {
    "index.html": INDEX,
    "about_en.html": EN_ABOUT, "about_fr.html": FR_ABOUT,
    "en/products.html": EN_PRODUCTS, "fr/products.html": FR_PRODUCTS,
    "contact-en.html": EN_CONTACT, "contact-fr.html": FR_CONTACT,
    "news_en.html": EN_NEWS, "news_fr.html": FR_NEWS,
    "history_en.html": EN_HISTORY, "history_fr.html": FR_HISTORY,
    "team_en.html": EN_TEAM, "team_fr.html": FR_TEAM_IN_ENGLISH,
}
for rel, text in FILES.items():
    path = os.path.join(ROOT, rel)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
