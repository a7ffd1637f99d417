#pragma once

// Generated by tools/embed_data.py from data/*.json. Do not edit by hand.

#include <string_view>

namespace ftc {

inline constexpr std::string_view kDefaultPatternBankJson = R"json([
  {
    "id": "E-type-of",
    "label": "E",
    "pattern": "^\\s*(?<A>(?:(?!\\b(?:not|never)\\b|n't\\b)[^,;.!?])+?)\\s+(?:is|are)\\s+(?:a\\s+)?(?:type|kind|form|sort)s?\\s+of\\s+(?<B>(?:(?!\\b(?:not|never)\\b|n't\\b)[^,;.!?])+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "E-implies",
    "label": "E",
    "pattern": "^(?!\\s*(?:because|since|they|he|she|it|there|this|that|these|those)\\b)\\s*(?<A>(?:(?!\\b(?:not|never)\\b|n't\\b)[^,;.!?])+?)\\s+(?:implies|imply|means|indicates|suggests)\\s+(?:that\\s+)?(?<B>(?:(?!\\b(?:not|never)\\b|n't\\b)[^,;.!?])+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "E-same-as",
    "label": "E",
    "pattern": "^\\s*(?<A>(?:(?!\\b(?:not|never)\\b|n't\\b)[^,;.!?])+?)\\s+(?:is|are)\\s+(?:the\\s+)?same\\s+as\\s+(?<B>(?:(?!\\b(?:not|never)\\b|n't\\b)[^,;.!?])+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "E-isa",
    "label": "E",
    "pattern": "^(?!\\s*(?:because|since|they|he|she|it|there|this|that|these|those)\\b)\\s*(?<A>(?:(?!\\b(?:not|never)\\b|n't\\b)[^,;.!?])+?)\\s+(?:is|are|was|were)\\s+(?!(?:not|never)\\b)(?!\\w+ing\\b)(?<B>(?:(?!\\b(?:not|never)\\b|n't\\b)[^,;.!?])+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "C-cannot",
    "label": "C",
    "pattern": "^\\s*(?<A>[^,;.!?]+?)\\s+(?:cannot|can not|can't|could not|couldn't)\\s+(?:also\\s+)?be\\s+(?<B>[^,;.!?]+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "C-not-same",
    "label": "C",
    "pattern": "^\\s*(?<A>[^,;.!?]+?)\\s+(?:is|are)\\s+not\\s+the\\s+same\\s+as\\s+(?<B>[^,;.!?]+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "C-not-isa",
    "label": "C",
    "pattern": "^(?!\\s*(?:because|since|they|he|she|it|there|this|that|these|those)\\b)\\s*(?<A>[^,;.!?]+?)\\s+(?:(?:is|are|was|were)\\s+(?:not|never)|isn't|aren't|wasn't|weren't)\\s+(?!necessarily\\b)(?<B>[^,;.!?]+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "N-not-necessarily",
    "label": "N",
    "pattern": "^\\s*(?<A>[^,;.!?]+?)\\s+(?:(?:is|are)\\s+not|isn't|aren't)\\s+necessarily\\s+(?<B>[^,;.!?]+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "N-not-all",
    "label": "N",
    "pattern": "^\\s*not\\s+(?:all|every)\\s+(?<A>[^,;.!?]+?)\\s+(?:is|are)\\s+(?<B>[^,;.!?]+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "N-does-not-mean",
    "label": "N",
    "pattern": "^\\s*(?:just\\s+because\\s+)?(?<A>[^,;.!?]+?)\\s+(?:does not|doesn't|do not|don't)\\s+(?:necessarily\\s+)?(?:mean|imply|indicate)\\s+(?:that\\s+)?(?<B>[^,;.!?]+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  },
  {
    "id": "N-may-not",
    "label": "N",
    "pattern": "^\\s*(?<A>[^,;.!?]+?)\\s+(?:may|might)\\s+not\\s+be\\s+(?<B>[^,;.!?]+?)\\s*[.!]?\\s*$",
    "normalize": [
      "articles",
      "punctuation"
    ],
    "source": "reconstructed"
  }
]
)json";

inline constexpr std::string_view kDefaultPromptSetJson = R"json({
  "E": [
    {
      "hypothesis": "The dog is barking at the girl.",
      "explanation": "The dog is an animal.",
      "a": "dog",
      "b": "animal",
      "counterfactual": "The animal is barking at the girl."
    },
    {
      "hypothesis": "A woman is slicing an onion.",
      "explanation": "An onion is a vegetable.",
      "a": "onion",
      "b": "vegetable",
      "counterfactual": "A woman is slicing a vegetable."
    },
    {
      "hypothesis": "A man plays the guitar on stage.",
      "explanation": "A guitar is an instrument.",
      "a": "guitar",
      "b": "instrument",
      "counterfactual": "A man plays the instrument on stage."
    },
    {
      "hypothesis": "Two kids are riding bikes.",
      "explanation": "Kids are children.",
      "a": "kids",
      "b": "children",
      "counterfactual": "Two children are riding bikes."
    },
    {
      "hypothesis": "A chef is cooking in a kitchen.",
      "explanation": "A chef is a person.",
      "a": "chef",
      "b": "person",
      "counterfactual": "A person is cooking in a kitchen."
    },
    {
      "hypothesis": "The puppy sleeps on a rug.",
      "explanation": "A puppy is a young dog.",
      "a": "puppy",
      "b": "young dog",
      "counterfactual": "The young dog sleeps on a rug."
    },
    {
      "hypothesis": "A boy kicks a soccer ball.",
      "explanation": "A soccer ball is a type of ball.",
      "a": "soccer ball",
      "b": "ball",
      "counterfactual": "A boy kicks a ball."
    },
    {
      "hypothesis": "A girl is holding a rose.",
      "explanation": "A rose is a flower.",
      "a": "rose",
      "b": "flower",
      "counterfactual": "A girl is holding a flower."
    },
    {
      "hypothesis": "The mother hugs her son.",
      "explanation": "A mother is a parent.",
      "a": "mother",
      "b": "parent",
      "counterfactual": "The parent hugs her son."
    },
    {
      "hypothesis": "A man drives a truck down the road.",
      "explanation": "A truck is a vehicle.",
      "a": "truck",
      "b": "vehicle",
      "counterfactual": "A man drives a vehicle down the road."
    },
    {
      "hypothesis": "A surfer rides a wave.",
      "explanation": "A surfer is a person.",
      "a": "surfer",
      "b": "person",
      "counterfactual": "A person rides a wave."
    },
    {
      "hypothesis": "Men are playing soccer in a field.",
      "explanation": "Soccer is a sport.",
      "a": "soccer",
      "b": "a sport",
      "counterfactual": "Men are playing a sport in a field."
    },
    {
      "hypothesis": "A woman walks her poodle.",
      "explanation": "A poodle is a dog.",
      "a": "poodle",
      "b": "dog",
      "counterfactual": "A woman walks her dog."
    },
    {
      "hypothesis": "The toddler is eating an apple.",
      "explanation": "A toddler is a child.",
      "a": "toddler",
      "b": "child",
      "counterfactual": "The child is eating an apple."
    },
    {
      "hypothesis": "A man is sitting on a sofa.",
      "explanation": "A sofa is a couch.",
      "a": "sofa",
      "b": "couch",
      "counterfactual": "A man is sitting on a couch."
    },
    {
      "hypothesis": "A cyclist rides through the city.",
      "explanation": "Cyclist implies a person riding a bike.",
      "a": "cyclist",
      "b": "person riding a bike",
      "counterfactual": "A person riding a bike rides through the city."
    },
    {
      "hypothesis": "A student reads a novel.",
      "explanation": "A novel is a book.",
      "a": "novel",
      "b": "book",
      "counterfactual": "A student reads a book."
    },
    {
      "hypothesis": "Musicians perform on a stage.",
      "explanation": "Musicians are people.",
      "a": "musicians",
      "b": "people",
      "counterfactual": "People perform on a stage."
    },
    {
      "hypothesis": "The kitten chases a string.",
      "explanation": "A kitten is a cat.",
      "a": "kitten",
      "b": "cat",
      "counterfactual": "The cat chases a string."
    },
    {
      "hypothesis": "A farmer feeds the cows.",
      "explanation": "Cows are animals.",
      "a": "cows",
      "b": "animals",
      "counterfactual": "A farmer feeds the animals."
    }
  ],
  "C": [
    {
      "hypothesis": "A man is sitting on the sofa.",
      "explanation": "A sofa is not a bench.",
      "a": "sofa",
      "b": "bench",
      "counterfactual": "A man is sitting on the bench."
    },
    {
      "hypothesis": "A woman is sleeping in her bed.",
      "explanation": "Sleeping is not running.",
      "a": "sleeping",
      "b": "running",
      "counterfactual": "A woman is running in her bed."
    },
    {
      "hypothesis": "The dog is swimming in the lake.",
      "explanation": "A lake is not a pool.",
      "a": "lake",
      "b": "pool",
      "counterfactual": "The dog is swimming in the pool."
    },
    {
      "hypothesis": "A boy is eating a sandwich.",
      "explanation": "A sandwich is not pizza.",
      "a": "sandwich",
      "b": "pizza",
      "counterfactual": "A boy is eating a pizza."
    },
    {
      "hypothesis": "Two women are dancing indoors.",
      "explanation": "Indoors is not outdoors.",
      "a": "indoors",
      "b": "outdoors",
      "counterfactual": "Two women are dancing outdoors."
    },
    {
      "hypothesis": "A man is riding a horse.",
      "explanation": "A horse cannot be a camel.",
      "a": "horse",
      "b": "camel",
      "counterfactual": "A man is riding a camel."
    },
    {
      "hypothesis": "The girl is wearing a red dress.",
      "explanation": "Red is not blue.",
      "a": "red",
      "b": "blue",
      "counterfactual": "The girl is wearing a blue dress."
    },
    {
      "hypothesis": "A cat sits on the roof.",
      "explanation": "A roof is not the ground.",
      "a": "roof",
      "b": "ground",
      "counterfactual": "A cat sits on the ground."
    },
    {
      "hypothesis": "The man is asleep.",
      "explanation": "Asleep is not awake.",
      "a": "asleep",
      "b": "awake",
      "counterfactual": "The man is awake."
    },
    {
      "hypothesis": "A child is crying.",
      "explanation": "Crying is not laughing.",
      "a": "crying",
      "b": "laughing",
      "counterfactual": "A child is laughing."
    },
    {
      "hypothesis": "A woman drinks coffee.",
      "explanation": "Coffee is not tea.",
      "a": "coffee",
      "b": "tea",
      "counterfactual": "A woman drinks tea."
    },
    {
      "hypothesis": "People are walking in the snow.",
      "explanation": "Snow is not sand.",
      "a": "snow",
      "b": "sand",
      "counterfactual": "People are walking in the sand."
    },
    {
      "hypothesis": "A man plays the piano.",
      "explanation": "A piano is not a violin.",
      "a": "piano",
      "b": "violin",
      "counterfactual": "A man plays the violin."
    },
    {
      "hypothesis": "The team is losing the game.",
      "explanation": "Losing is not winning.",
      "a": "losing",
      "b": "winning",
      "counterfactual": "The team is winning the game."
    },
    {
      "hypothesis": "A boy is standing.",
      "explanation": "A boy cannot be standing and sitting.",
      "a": "standing",
      "b": "sitting",
      "counterfactual": "A boy is sitting."
    },
    {
      "hypothesis": "A girl reads at night.",
      "explanation": "Night is not day.",
      "a": "night",
      "b": "day",
      "counterfactual": "A girl reads at day."
    },
    {
      "hypothesis": "The old man is running.",
      "explanation": "A man cannot be old and young.",
      "a": "old",
      "b": "young",
      "counterfactual": "The young man is running."
    },
    {
      "hypothesis": "A dog is chasing a ball.",
      "explanation": "A ball is not a frisbee.",
      "a": "ball",
      "b": "frisbee",
      "counterfactual": "A dog is chasing a frisbee."
    },
    {
      "hypothesis": "The street is empty.",
      "explanation": "Empty is not crowded.",
      "a": "empty",
      "b": "crowded",
      "counterfactual": "The street is crowded."
    },
    {
      "hypothesis": "A woman is inside a store.",
      "explanation": "Inside is not outside.",
      "a": "inside",
      "b": "outside",
      "counterfactual": "A woman is outside a store."
    }
  ],
  "N": [
    {
      "hypothesis": "A boy on a tire swing outside.",
      "explanation": "A tire swing is not necessarily outside.",
      "a": "tire swing",
      "b": "outside",
      "counterfactual": "A boy on a tire swing.",
      "counterfactual_negb": "A boy not outside."
    },
    {
      "hypothesis": "A man is playing guitar for money.",
      "explanation": "Playing guitar does not mean for money.",
      "a": "playing guitar",
      "b": "for money",
      "counterfactual": "A man is playing guitar.",
      "counterfactual_negb": "A man is not for money."
    },
    {
      "hypothesis": "A woman is cooking dinner for her family.",
      "explanation": "Not all cooking is for her family.",
      "a": "cooking",
      "b": "for her family",
      "counterfactual": "A woman is cooking dinner.",
      "counterfactual_negb": "A woman is not for her family."
    },
    {
      "hypothesis": "A girl is running to school.",
      "explanation": "Running is not necessarily to school.",
      "a": "running",
      "b": "to school",
      "counterfactual": "A girl is running.",
      "counterfactual_negb": "A girl is not to school."
    },
    {
      "hypothesis": "A dog is playing with its owner in the park.",
      "explanation": "A dog playing is not necessarily in the park.",
      "a": "playing with its owner",
      "b": "in the park",
      "counterfactual": "A dog is playing with its owner.",
      "counterfactual_negb": "A dog is not in the park."
    },
    {
      "hypothesis": "Two men are talking about politics.",
      "explanation": "Talking is not necessarily about politics.",
      "a": "talking",
      "b": "about politics",
      "counterfactual": "Two men are talking.",
      "counterfactual_negb": "Two men are not about politics."
    },
    {
      "hypothesis": "A child is smiling at his mother.",
      "explanation": "Smiling does not imply at his mother.",
      "a": "smiling",
      "b": "at his mother",
      "counterfactual": "A child is smiling.",
      "counterfactual_negb": "A child is not at his mother."
    },
    {
      "hypothesis": "A man in a suit is going to work.",
      "explanation": "A suit does not mean going to work.",
      "a": "in a suit",
      "b": "going to work",
      "counterfactual": "A man in a suit.",
      "counterfactual_negb": "A man is not going to work."
    },
    {
      "hypothesis": "A woman is reading a mystery novel.",
      "explanation": "A novel is not necessarily a mystery.",
      "a": "novel",
      "b": "mystery",
      "counterfactual": "A woman is reading a novel.",
      "counterfactual_negb": "A woman is reading not a mystery."
    },
    {
      "hypothesis": "The band is playing a famous song.",
      "explanation": "A song is not necessarily famous.",
      "a": "song",
      "b": "famous",
      "counterfactual": "The band is playing a song.",
      "counterfactual_negb": "The band is playing not famous."
    },
    {
      "hypothesis": "A boy is jumping into a cold lake.",
      "explanation": "A lake is not necessarily cold.",
      "a": "lake",
      "b": "cold",
      "counterfactual": "A boy is jumping into a lake.",
      "counterfactual_negb": "A boy is jumping not cold."
    },
    {
      "hypothesis": "A woman sells fresh fruit at a market.",
      "explanation": "Fruit may not be fresh.",
      "a": "fruit",
      "b": "fresh",
      "counterfactual": "A woman sells fruit at a market.",
      "counterfactual_negb": "A woman sells not fresh at a market."
    },
    {
      "hypothesis": "A man is sleeping because he is tired.",
      "explanation": "Sleeping does not mean he is tired.",
      "a": "sleeping",
      "b": "because he is tired",
      "counterfactual": "A man is sleeping.",
      "counterfactual_negb": "A man is not because he is tired."
    },
    {
      "hypothesis": "Kids are playing in their backyard.",
      "explanation": "Playing is not necessarily in their backyard.",
      "a": "playing",
      "b": "in their backyard",
      "counterfactual": "Kids are playing.",
      "counterfactual_negb": "Kids are not in their backyard."
    },
    {
      "hypothesis": "A tall man is climbing a mountain.",
      "explanation": "A man is not necessarily tall.",
      "a": "man",
      "b": "tall",
      "counterfactual": "A man is climbing a mountain.",
      "counterfactual_negb": "A not tall is climbing a mountain."
    },
    {
      "hypothesis": "A chef is preparing a birthday cake.",
      "explanation": "A cake is not necessarily a birthday cake.",
      "a": "cake",
      "b": "birthday",
      "counterfactual": "A chef is preparing a cake.",
      "counterfactual_negb": "A chef is preparing not a birthday."
    },
    {
      "hypothesis": "A girl is waiting for her friend.",
      "explanation": "Waiting is not necessarily for her friend.",
      "a": "waiting",
      "b": "for her friend",
      "counterfactual": "A girl is waiting.",
      "counterfactual_negb": "A girl is not for her friend."
    },
    {
      "hypothesis": "The couple is on their honeymoon at the beach.",
      "explanation": "Being at the beach does not mean on their honeymoon.",
      "a": "at the beach",
      "b": "on their honeymoon",
      "counterfactual": "The couple is at the beach.",
      "counterfactual_negb": "The couple is not on their honeymoon."
    },
    {
      "hypothesis": "A man is fishing to catch dinner.",
      "explanation": "Fishing does not mean to catch dinner.",
      "a": "fishing",
      "b": "to catch dinner",
      "counterfactual": "A man is fishing.",
      "counterfactual_negb": "A man is not to catch dinner."
    },
    {
      "hypothesis": "A woman is painting a portrait of her son.",
      "explanation": "A portrait is not necessarily of her son.",
      "a": "portrait",
      "b": "of her son",
      "counterfactual": "A woman is painting a portrait.",
      "counterfactual_negb": "A woman is painting not of her son."
    }
  ]
}
)json";

}  // namespace ftc
