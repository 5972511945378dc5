pub mod amen;
pub mod fields;
pub mod folog;
pub mod groups;
pub mod matgrp;

// The guide's snippets run as doc tests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/sl2.md")]
    mod sl2 {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/folner.md")]
    mod folner {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/logic.md")]
    mod logic {}
    #[doc = include_str!("../../../book/src/freewords.md")]
    mod freewords {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
