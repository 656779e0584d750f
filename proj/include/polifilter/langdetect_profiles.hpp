#pragma once

// Reference texts the built-in n-gram detector derives its language
// profiles from. Mixed registers (scholarly, everyday, news) so that no
// single subject dominates a profile.

#include <array>
#include <string_view>

namespace polifilter::profiles {

struct ReferenceText {
    std::string_view code;
    std::string_view text;
};

inline constexpr std::array<ReferenceText, 7> kReferenceTexts = {{
    {"en",
     "The study examines how institutions shape the behaviour of people and organisations over time. "
     "We collected data from several sources and analysed the results with statistical methods that are "
     "widely used in the social sciences. Our findings show that the effect is stronger when the groups "
     "have access to more information and when their members trust each other. In the second part of the "
     "article we discuss what these results mean for the theory and for practice, and which questions remain "
     "open for further research. The weather was cold this morning, so she took the train instead of walking "
     "to work. Children should be able to play outside without their parents worrying about traffic. "
     "This book describes the history of the city from the early middle ages until the present day. "
     "Researchers have found that the new method is faster, cheaper and more reliable than the old one, "
     "although it requires careful preparation of the samples. The committee will publish its report next "
     "week, and the government has promised to respond within three months. Which of these options would "
     "you choose if you had to decide today? Most of the participants said that they would like to take part "
     "again in the future. The authors argue that the relationship between growth and inequality is more "
     "complex than previously thought."},
    {"de",
     "Die Untersuchung zeigt, wie Institutionen das Verhalten von Menschen und Organisationen im Laufe der "
     "Zeit prägen. Wir haben Daten aus mehreren Quellen gesammelt und die Ergebnisse mit statistischen "
     "Verfahren ausgewertet, die in den Sozialwissenschaften weit verbreitet sind. Unsere Befunde zeigen, "
     "dass der Effekt stärker ist, wenn die Gruppen über mehr Informationen verfügen und sich ihre Mitglieder "
     "gegenseitig vertrauen. Im zweiten Teil des Beitrags diskutieren wir, was diese Ergebnisse für die "
     "Theorie und die Praxis bedeuten und welche Fragen für die weitere Forschung offen bleiben. Heute Morgen "
     "war es sehr kalt, deshalb ist sie mit dem Zug zur Arbeit gefahren, statt zu Fuß zu gehen. Kinder "
     "sollten draußen spielen können, ohne dass sich ihre Eltern wegen des Verkehrs Sorgen machen müssen. "
     "Dieses Buch beschreibt die Geschichte der Stadt vom frühen Mittelalter bis zur Gegenwart. Forscher haben "
     "herausgefunden, dass das neue Verfahren schneller, günstiger und zuverlässiger ist als das alte, "
     "obwohl es eine sorgfältige Vorbereitung der Proben erfordert. Der Ausschuss wird seinen Bericht nächste "
     "Woche veröffentlichen, und die Regierung hat versprochen, innerhalb von drei Monaten zu antworten. "
     "Welche dieser Möglichkeiten würden Sie wählen, wenn Sie sich heute entscheiden müssten? Die meisten "
     "Teilnehmer sagten, dass sie auch in Zukunft gerne wieder mitmachen würden. Die Autoren argumentieren, "
     "dass der Zusammenhang zwischen Wachstum und Ungleichheit komplexer ist als bisher angenommen."},
    {"fr",
     "L'étude examine comment les institutions façonnent le comportement des personnes et des organisations "
     "au fil du temps. Nous avons recueilli des données provenant de plusieurs sources et analysé les "
     "résultats à l'aide de méthodes statistiques largement utilisées dans les sciences sociales. Nos "
     "résultats montrent que l'effet est plus fort lorsque les groupes ont accès à davantage d'informations "
     "et lorsque leurs membres se font mutuellement confiance. Dans la deuxième partie de l'article, nous "
     "discutons de ce que ces résultats signifient pour la théorie et pour la pratique, ainsi que des "
     "questions qui restent ouvertes pour de futures recherches. Ce matin il faisait très froid, alors elle a "
     "pris le train au lieu d'aller au travail à pied. Les enfants devraient pouvoir jouer dehors sans que "
     "leurs parents s'inquiètent de la circulation. Ce livre décrit l'histoire de la ville depuis le haut "
     "Moyen Âge jusqu'à nos jours. Les chercheurs ont constaté que la nouvelle méthode est plus rapide, moins "
     "chère et plus fiable que l'ancienne, bien qu'elle exige une préparation soigneuse des échantillons. Le "
     "comité publiera son rapport la semaine prochaine et le gouvernement a promis de répondre dans un délai "
     "de trois mois. Laquelle de ces options choisiriez-vous si vous deviez décider aujourd'hui ? La plupart "
     "des participants ont déclaré qu'ils aimeraient participer de nouveau à l'avenir. Les auteurs soutiennent "
     "que la relation entre la croissance et les inégalités est plus complexe qu'on ne le pensait."},
    {"es",
     "El estudio examina cómo las instituciones configuran el comportamiento de las personas y de las "
     "organizaciones a lo largo del tiempo. Hemos reunido datos de varias fuentes y analizado los resultados "
     "con métodos estadísticos que se utilizan ampliamente en las ciencias sociales. Nuestros hallazgos "
     "muestran que el efecto es más fuerte cuando los grupos tienen acceso a más información y cuando sus "
     "miembros confían los unos en los otros. En la segunda parte del artículo discutimos qué significan "
     "estos resultados para la teoría y para la práctica, y qué preguntas quedan abiertas para futuras "
     "investigaciones. Esta mañana hacía mucho frío, así que ella tomó el tren en lugar de ir caminando al "
     "trabajo. Los niños deberían poder jugar fuera sin que sus padres se preocupen por el tráfico. Este "
     "libro describe la historia de la ciudad desde la alta Edad Media hasta nuestros días. Los "
     "investigadores han descubierto que el nuevo método es más rápido, más barato y más fiable que el "
     "anterior, aunque requiere una preparación cuidadosa de las muestras. El comité publicará su informe la "
     "próxima semana y el gobierno ha prometido responder en un plazo de tres meses. ¿Cuál de estas opciones "
     "elegiría usted si tuviera que decidir hoy? La mayoría de los participantes dijeron que les gustaría "
     "volver a participar en el futuro."},
    {"it",
     "Lo studio esamina il modo in cui le istituzioni plasmano il comportamento delle persone e delle "
     "organizzazioni nel corso del tempo. Abbiamo raccolto dati da diverse fonti e analizzato i risultati con "
     "metodi statistici ampiamente utilizzati nelle scienze sociali. I nostri risultati mostrano che l'effetto "
     "è più forte quando i gruppi hanno accesso a maggiori informazioni e quando i loro membri si fidano gli "
     "uni degli altri. Nella seconda parte dell'articolo discutiamo che cosa significano questi risultati per "
     "la teoria e per la pratica, e quali domande restano aperte per la ricerca futura. Stamattina faceva "
     "molto freddo, quindi lei ha preso il treno invece di andare al lavoro a piedi. I bambini dovrebbero "
     "poter giocare all'aperto senza che i genitori si preoccupino del traffico. Questo libro descrive la "
     "storia della città dall'alto medioevo fino ai giorni nostri. I ricercatori hanno scoperto che il nuovo "
     "metodo è più veloce, più economico e più affidabile di quello vecchio, anche se richiede una "
     "preparazione accurata dei campioni. La commissione pubblicherà la sua relazione la prossima settimana e "
     "il governo ha promesso di rispondere entro tre mesi. Quale di queste opzioni sceglierebbe se dovesse "
     "decidere oggi? La maggior parte dei partecipanti ha detto che vorrebbe partecipare di nuovo in futuro."},
    {"nl",
     "Het onderzoek laat zien hoe instellingen het gedrag van mensen en organisaties in de loop van de tijd "
     "vormgeven. We hebben gegevens uit verschillende bronnen verzameld en de resultaten geanalyseerd met "
     "statistische methoden die in de sociale wetenschappen veel worden gebruikt. Onze bevindingen tonen aan "
     "dat het effect sterker is wanneer de groepen toegang hebben tot meer informatie en wanneer hun leden "
     "elkaar vertrouwen. In het tweede deel van het artikel bespreken we wat deze resultaten betekenen voor de "
     "theorie en voor de praktijk, en welke vragen open blijven voor verder onderzoek. Vanochtend was het erg "
     "koud, dus nam ze de trein in plaats van naar haar werk te lopen. Kinderen moeten buiten kunnen spelen "
     "zonder dat hun ouders zich zorgen maken over het verkeer. Dit boek beschrijft de geschiedenis van de "
     "stad van de vroege middeleeuwen tot vandaag. Onderzoekers hebben ontdekt dat de nieuwe methode sneller, "
     "goedkoper en betrouwbaarder is dan de oude, hoewel ze een zorgvuldige voorbereiding van de monsters "
     "vereist. De commissie publiceert volgende week haar rapport en de regering heeft beloofd binnen drie "
     "maanden te reageren. Welke van deze mogelijkheden zou u kiezen als u vandaag moest beslissen? De "
     "meeste deelnemers zeiden dat ze in de toekomst graag opnieuw zouden meedoen."},
    {"pt",
     "O estudo examina como as instituições moldam o comportamento das pessoas e das organizações ao longo "
     "do tempo. Recolhemos dados de várias fontes e analisámos os resultados com métodos estatísticos "
     "amplamente utilizados nas ciências sociais. Os nossos resultados mostram que o efeito é mais forte "
     "quando os grupos têm acesso a mais informação e quando os seus membros confiam uns nos outros. Na "
     "segunda parte do artigo discutimos o que estes resultados significam para a teoria e para a prática, e "
     "que questões permanecem em aberto para investigação futura. Esta manhã estava muito frio, por isso ela "
     "apanhou o comboio em vez de ir a pé para o trabalho. As crianças deviam poder brincar lá fora sem que os "
     "pais se preocupem com o trânsito. Este livro descreve a história da cidade desde a alta Idade Média até "
     "aos nossos dias. Os investigadores descobriram que o novo método é mais rápido, mais barato e mais "
     "fiável do que o antigo, embora exija uma preparação cuidadosa das amostras. A comissão vai publicar o "
     "seu relatório na próxima semana e o governo prometeu responder no prazo de três meses. Qual destas "
     "opções escolheria se tivesse de decidir hoje? A maioria dos participantes disse que gostaria de voltar "
     "a participar no futuro."},
}};

}  // namespace polifilter::profiles
